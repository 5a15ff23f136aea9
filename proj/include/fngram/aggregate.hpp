#pragma once

// Experiment settings lattice (0.0 - 3.B), settings filters, grouping of
// sentence patterns into valence patterns, and the per-settings statistics rows.

#include <algorithm>
#include <array>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fngram/normalize.hpp"
#include "fngram/patterns.hpp"
#include "fngram/text.hpp"
#include "fngram/types.hpp"

namespace fngram {

enum class SettingsId { S0_0, S1_0, S1_A, S1_B, S2_0, S2_A, S2_B, S3_0, S3_A, S3_B };

inline constexpr std::array<SettingsId, 10> kAllSettings{
    SettingsId::S0_0, SettingsId::S1_0, SettingsId::S1_A, SettingsId::S1_B, SettingsId::S2_0,
    SettingsId::S2_A, SettingsId::S2_B, SettingsId::S3_0, SettingsId::S3_A, SettingsId::S3_B};

struct Settings {
  SettingsId id = SettingsId::S2_B;
  bool generalize_types = false;
  bool skip_unconsidered = false;
  bool dedupe_repeated_fes = false;
  bool drop_noncore = false;
  bool drop_singleton_valences = false;

  static Settings of(SettingsId id) {
    Settings s;
    s.id = id;
    const int level = level_of(id);
    const char variant = variant_of(id);
    s.skip_unconsidered = level >= 1;
    s.generalize_types = level >= 2;
    s.drop_singleton_valences = level == 3;
    s.dedupe_repeated_fes = variant != '0';
    s.drop_noncore = variant == 'B';
    return s;
  }

  std::string name() const { return std::to_string(level_of(id)) + "." + variant_of(id); }

  /// The normalization regime whose output this setting consumes.
  NormalizeOptions normalize_options(const VoiceRules& rules = {}) const {
    NormalizeOptions o;
    o.regime = generalize_types ? TypeRegime::Interlingual : TypeRegime::Native;
    o.skip_unconsidered = skip_unconsidered;
    o.rules = rules;
    return o;
  }

  friend bool operator==(const Settings&, const Settings&) = default;

private:
  static int level_of(SettingsId id) {
    switch (id) {
      case SettingsId::S0_0: return 0;
      case SettingsId::S1_0: case SettingsId::S1_A: case SettingsId::S1_B: return 1;
      case SettingsId::S2_0: case SettingsId::S2_A: case SettingsId::S2_B: return 2;
      default: return 3;
    }
  }
  static char variant_of(SettingsId id) {
    switch (id) {
      case SettingsId::S1_A: case SettingsId::S2_A: case SettingsId::S3_A: return 'A';
      case SettingsId::S1_B: case SettingsId::S2_B: case SettingsId::S3_B: return 'B';
      default: return '0';
    }
  }
};

inline std::optional<Settings> parse_settings(std::string_view name) {
  for (auto id : kAllSettings) {
    auto s = Settings::of(id);
    if (s.name() == name) return s;
  }
  return std::nullopt;
}

enum class DropReason { MixedRepeatedFeTypes, NoFesLeft, SingletonValence };

inline std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::MixedRepeatedFeTypes: return "MixedRepeatedFeTypes";
    case DropReason::NoFesLeft: return "NoFesLeft";
    case DropReason::SingletonValence: return "SingletonValence";
  }
  return "";
}

struct DroppedPattern {
  std::string sentence_id;
  std::string frame;
  DropReason reason;
};

struct FilterResult {
  std::vector<SentencePattern> kept;
  std::vector<DroppedPattern> dropped;
};

namespace detail {

inline int function_rank(SynFunction f) {
  switch (f) {
    case SynFunction::Subj: return 0;
    case SynFunction::Obj: return 1;
    case SynFunction::None: break;
  }
  return 2;
}

}  // namespace detail

/// Collapses repeated FEs of one type into one (Subj preferred over Obj over none,
/// so the result does not depend on word order). Returns nullopt when an FE is
/// repeated with different types.
inline std::optional<std::vector<FeRealization>> dedupe_repeated_fes(const std::vector<FeRealization>& fes) {
  std::map<std::string, std::size_t> chosen;  // display name -> index into fes
  for (std::size_t i = 0; i < fes.size(); ++i) {
    auto [it, fresh] = chosen.emplace(fes[i].display_name(), i);
    if (fresh) continue;
    const auto& prev = fes[it->second];
    if (prev.type != fes[i].type) return std::nullopt;
    if (detail::function_rank(fes[i].function) < detail::function_rank(prev.function)) it->second = i;
  }
  std::vector<FeRealization> out;
  for (std::size_t i = 0; i < fes.size(); ++i) {
    if (chosen.at(fes[i].display_name()) == i) out.push_back(fes[i]);
  }
  return out;
}

/// Applies the filtering steps of a setting: non-core removal, then repeated-FE
/// handling. Singleton valence removal happens after grouping.
inline FilterResult apply_settings(const std::vector<SentencePattern>& patterns, const Settings& s) {
  FilterResult out;
  out.kept.reserve(patterns.size());
  for (const auto& p : patterns) {
    if (s.generalize_types) {
      for (const auto& r : p.realizations) {
        if (!r.rgl_type()) {
          throw Error("settings " + s.name() + " need interlingual patterns, got '" + r.token() + "' in " +
                      p.sentence_id);
        }
      }
    }
    SentencePattern q = p;
    if (s.drop_noncore) {
      std::erase_if(q.realizations, [](const FeRealization& r) { return r.coreness == Coreness::NonCore; });
      if (q.realizations.empty()) {
        out.dropped.push_back({p.sentence_id, p.frame, DropReason::NoFesLeft});
        continue;
      }
    }
    if (s.dedupe_repeated_fes) {
      auto deduped = dedupe_repeated_fes(q.realizations);
      if (!deduped) {
        out.dropped.push_back({p.sentence_id, p.frame, DropReason::MixedRepeatedFeTypes});
        continue;
      }
      q.realizations = std::move(*deduped);
    }
    out.kept.push_back(std::move(q));
  }
  return out;
}

struct ValencePattern {
  std::string frame;
  Voice voice = Voice::Act;
  std::vector<FeRealization> fes;  // sorted, unique, no prepositions
  int count = 0;
  std::map<std::string, int> sentence_variants;

  std::vector<std::string> tokens() const {
    std::vector<std::string> out;
    for (const auto& f : fes) out.push_back(f.valence_token());
    return out;
  }
  std::string fe_string() const { return text::join(tokens(), ","); }

  friend bool operator==(const ValencePattern&, const ValencePattern&) = default;
};

/// Order- and preposition-free FE set of a sentence pattern.
inline std::vector<FeRealization> valence_fes(const std::vector<FeRealization>& realizations) {
  std::vector<FeRealization> fes;
  for (auto r : realizations) {
    r.preposition.reset();
    fes.push_back(std::move(r));
  }
  auto key = [](const FeRealization& r) {
    return std::make_tuple(r.display_name(), r.type, detail::function_rank(r.function));
  };
  std::sort(fes.begin(), fes.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  fes.erase(std::unique(fes.begin(), fes.end()), fes.end());
  return fes;
}

/// Canonical order: frame, voice, descending count, FE set.
inline void sort_valences(std::vector<ValencePattern>& v) {
  std::sort(v.begin(), v.end(), [](const ValencePattern& a, const ValencePattern& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    if (a.voice != b.voice) return a.voice < b.voice;
    if (a.count != b.count) return a.count > b.count;
    return a.fe_string() < b.fe_string();
  });
}

inline std::vector<ValencePattern> group_valence_patterns(const std::vector<SentencePattern>& patterns) {
  std::map<std::tuple<std::string, Voice, std::string>, ValencePattern> groups;
  for (const auto& p : patterns) {
    auto fes = valence_fes(p.realizations);
    std::vector<std::string> toks;
    for (const auto& f : fes) toks.push_back(f.valence_token());
    auto& g = groups[{p.frame, p.voice, text::join(toks, ",")}];
    if (g.count == 0) {
      g.frame = p.frame;
      g.voice = p.voice;
      g.fes = std::move(fes);
    }
    ++g.count;
    ++g.sentence_variants[p.fe_string()];
  }
  std::vector<ValencePattern> out;
  out.reserve(groups.size());
  for (auto& [k, v] : groups) out.push_back(std::move(v));
  sort_valences(out);
  return out;
}

inline std::vector<ValencePattern> drop_singleton_valences(std::vector<ValencePattern> valences) {
  std::erase_if(valences, [](const ValencePattern& v) { return v.count <= 1; });
  return valences;
}

struct SettingsResult {
  Settings settings;
  std::vector<ValencePattern> valences;
  std::vector<DroppedPattern> dropped;
};

/// apply_settings + grouping + (for 3.x) singleton removal over patterns normalized
/// under the setting's regime.
inline SettingsResult compute_settings(const std::vector<SentencePattern>& patterns, const Settings& s) {
  SettingsResult r;
  r.settings = s;
  auto filtered = apply_settings(patterns, s);
  r.dropped = std::move(filtered.dropped);
  r.valences = group_valence_patterns(filtered.kept);
  if (s.drop_singleton_valences) r.valences = drop_singleton_valences(std::move(r.valences));
  return r;
}

/// One row of the per-settings statistics table.
struct StatsRow {
  std::string settings;
  std::size_t frames = 0;
  std::size_t valence_patterns = 0;
  double valence_patterns_per_frame = 0;
  std::size_t sentence_patterns = 0;
  double sentence_patterns_per_valence_pattern = 0;
  std::size_t examples = 0;
  double examples_per_sentence_pattern = 0;
};

inline StatsRow stats_row(const std::string& settings, const std::vector<ValencePattern>& valences) {
  StatsRow row;
  row.settings = settings;
  std::set<std::string> frames;
  for (const auto& v : valences) {
    frames.insert(v.frame);
    row.sentence_patterns += v.sentence_variants.size();
    row.examples += static_cast<std::size_t>(v.count);
  }
  row.frames = frames.size();
  row.valence_patterns = valences.size();
  auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  row.valence_patterns_per_frame = ratio(row.valence_patterns, row.frames);
  row.sentence_patterns_per_valence_pattern = ratio(row.sentence_patterns, row.valence_patterns);
  row.examples_per_sentence_pattern = ratio(row.examples, row.sentence_patterns);
  return row;
}

inline std::vector<StatsRow> stats_table(const std::vector<SettingsResult>& results) {
  std::vector<StatsRow> rows;
  for (const auto& r : results) rows.push_back(stats_row(r.settings.name(), r.valences));
  return rows;
}

inline constexpr std::string_view kStatsHeader =
    "settings,frames,valence_patterns,valence_patterns_per_frame,sentence_patterns,"
    "sentence_patterns_per_valence_pattern,examples,examples_per_sentence_pattern";

inline void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << kStatsHeader << '\n';
  for (const auto& r : rows) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(1);
    line << r.settings << ',' << r.frames << ',' << r.valence_patterns << ',' << r.valence_patterns_per_frame << ','
         << r.sentence_patterns << ',' << r.sentence_patterns_per_valence_pattern << ',' << r.examples << ','
         << r.examples_per_sentence_pattern;
    out << line.str() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Valence TSV: frame<TAB>voice<TAB>fe-set(comma-joined)<TAB>count

inline void write_valences(std::ostream& out, const std::vector<ValencePattern>& valences) {
  for (const auto& v : valences) {
    out << v.frame << '\t' << to_string(v.voice) << '\t' << v.fe_string() << '\t' << v.count << '\n';
  }
}

inline std::vector<ValencePattern> read_valences(std::istream& in) {
  std::vector<ValencePattern> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto f = text::split(line, '\t');
    const auto where = "valences line " + std::to_string(lineno);
    if (f.size() != 4) throw Error(where + ": expected 4 tab-separated fields");
    ValencePattern v;
    v.frame = f[0];
    auto voice = parse_voice(f[1]);
    if (!voice) throw Error(where + ": bad voice '" + f[1] + "'");
    v.voice = *voice;
    std::vector<FeRealization> fes;
    for (const auto& tok : text::split_nonempty(f[2], ',')) fes.push_back(parse_fe_token(tok));
    v.fes = valence_fes(fes);
    if (!text::all_digits(f[3]) || std::stoi(f[3]) < 1) throw Error(where + ": bad count '" + f[3] + "'");
    v.count = std::stoi(f[3]);
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-frame summaries in the layout
//
//   Event_VP  Experiencer_NP.Subj               : 53
//     Experiencer_NP.Subj  Event_VP               51

inline std::string render_frame_summary(const std::string& frame, const std::vector<ValencePattern>& valences) {
  constexpr std::size_t kWidth = 44;
  auto pad = [](std::string s) {
    if (s.size() < kWidth) s.append(kWidth - s.size(), ' ');
    else s += ' ';
    return s;
  };
  std::ostringstream out;
  bool first_section = true;
  for (Voice voice : {Voice::Act, Voice::Pass}) {
    std::vector<const ValencePattern*> vs;
    for (const auto& v : valences) {
      if (v.frame == frame && v.voice == voice) vs.push_back(&v);
    }
    if (vs.empty()) continue;
    std::stable_sort(vs.begin(), vs.end(), [](const ValencePattern* a, const ValencePattern* b) {
      return a->count != b->count ? a->count > b->count : a->fe_string() < b->fe_string();
    });
    if (!first_section) out << '\n';
    first_section = false;
    out << frame << ' ' << to_string(voice) << '\n';
    for (const auto* v : vs) {
      out << pad(text::join(v->tokens(), "  ")) << ": " << v->count << '\n';
      std::vector<std::pair<std::string, int>> variants(v->sentence_variants.begin(), v->sentence_variants.end());
      std::stable_sort(variants.begin(), variants.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      for (const auto& [variant, n] : variants) {
        std::string spaced;
        for (const auto& tok : text::split_nonempty(variant, ' ')) {
          if (!spaced.empty()) spaced += "  ";
          spaced += tok;
        }
        out << "  " << pad(spaced) << n << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace fngram
