#pragma once

// Shared frame and valence-pattern sets of two framenets: exact key intersection, or
// fuzzy intersection by subsumption, followed by pruning of subsumed members.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "fngram/aggregate.hpp"
#include "fngram/patterns.hpp"
#include "fngram/text.hpp"
#include "fngram/types.hpp"

namespace fngram {

/// Comparison key of a valence pattern at one granularity. Semantic keys carry FE
/// names only and no voice; semantic-syntactic keys carry `<FE>_<Type>` and the voice.
struct PatternKey {
  std::string frame;
  std::optional<Voice> voice;
  std::vector<std::string> fes;  // sorted, unique

  std::string fe_string() const { return text::join(fes, ","); }

  friend bool operator==(const PatternKey&, const PatternKey&) = default;
  friend bool operator<(const PatternKey& a, const PatternKey& b) {
    return std::tie(a.frame, a.voice, a.fes) < std::tie(b.frame, b.voice, b.fes);
  }
};

inline PatternKey key_of(const ValencePattern& v, MatchLevel level) {
  PatternKey k;
  k.frame = v.frame;
  if (level == MatchLevel::SemanticSyntactic) k.voice = v.voice;
  for (const auto& fe : v.fes) {
    k.fes.push_back(level == MatchLevel::Semantic ? fe.display_name() : fe.category());
  }
  std::sort(k.fes.begin(), k.fes.end());
  k.fes.erase(std::unique(k.fes.begin(), k.fes.end()), k.fes.end());
  return k;
}

/// a subsumes b: same frame (and voice, when keyed) and b's FE set is a subset of a's.
inline bool subsumes(const PatternKey& a, const PatternKey& b) {
  return a.frame == b.frame && a.voice == b.voice &&
         std::includes(a.fes.begin(), a.fes.end(), b.fes.begin(), b.fes.end());
}

inline bool subsumes(const ValencePattern& a, const ValencePattern& b, MatchLevel level) {
  return subsumes(key_of(a, level), key_of(b, level));
}

enum class Side { Left, Right };

struct SharedMember {
  PatternKey key;
  bool final = true;
  std::vector<ValencePattern> left;   // key-equal contributors from each side
  std::vector<ValencePattern> right;
  std::set<std::string> provenance;   // "both", "left<right", "right<left"

  int left_count() const {
    int n = 0;
    for (const auto& v : left) n += v.count;
    return n;
  }
  int right_count() const {
    int n = 0;
    for (const auto& v : right) n += v.count;
    return n;
  }

  friend bool operator==(const SharedMember&, const SharedMember&) = default;
};

struct SharedPatternSet {
  MatchLevel level = MatchLevel::SemanticSyntactic;
  MatchMode mode = MatchMode::Fuzzy;
  bool pruned = true;
  std::vector<SharedMember> members;  // every admitted key, sorted
  std::set<std::string> shared_frames;
  std::size_t left_keys = 0;           // distinct keys per side, all frames
  std::size_t right_keys = 0;
  std::size_t admitted_left = 0;       // keys of each side that entered the intersection
  std::size_t admitted_right = 0;

  std::vector<const SharedMember*> finals() const {
    std::vector<const SharedMember*> out;
    for (const auto& m : members) {
      if (m.final) out.push_back(&m);
    }
    return out;
  }
  std::set<std::string> final_frames() const {
    std::set<std::string> out;
    for (const auto& m : members) {
      if (m.final) out.insert(m.key.frame);
    }
    return out;
  }
};

struct IntersectOptions {
  bool prune = true;
};

namespace detail {

using KeyMap = std::map<PatternKey, std::vector<ValencePattern>>;

inline KeyMap index_by_key(const std::vector<ValencePattern>& vs, MatchLevel level) {
  KeyMap out;
  for (const auto& v : vs) out[key_of(v, level)].push_back(v);
  return out;
}

inline std::set<std::string> frames_of(const std::vector<ValencePattern>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.frame);
  return out;
}

/// Keys of one (frame, voice) bucket as bitsets over the bucket's FE universe.
struct Bucket {
  std::vector<const PatternKey*> keys;
  std::vector<boost::dynamic_bitset<>> bits;
  std::vector<Side> sides;
};

inline void fill_bits(Bucket& b) {
  std::map<std::string, std::size_t> universe;
  for (const auto* k : b.keys) {
    for (const auto& fe : k->fes) universe.emplace(fe, 0);
  }
  std::size_t i = 0;
  for (auto& [fe, idx] : universe) idx = i++;
  b.bits.clear();
  for (const auto* k : b.keys) {
    boost::dynamic_bitset<> bs(universe.size());
    for (const auto& fe : k->fes) bs.set(universe.at(fe));
    b.bits.push_back(std::move(bs));
  }
}

}  // namespace detail

/// Intersects two valence sets at `level`. Both sides are first restricted to their
/// shared frames. Fuzzy admits a pattern of one side when some pattern of the other
/// side subsumes it. With `prune`, members subsumed by another member are marked
/// non-final.
inline SharedPatternSet intersect(const std::vector<ValencePattern>& left, const std::vector<ValencePattern>& right,
                                  MatchLevel level, MatchMode mode, IntersectOptions opts = {}) {
  SharedPatternSet out;
  out.level = level;
  out.mode = mode;
  out.pruned = opts.prune;

  const auto lframes = detail::frames_of(left);
  const auto rframes = detail::frames_of(right);
  std::set_intersection(lframes.begin(), lframes.end(), rframes.begin(), rframes.end(),
                        std::inserter(out.shared_frames, out.shared_frames.end()));

  const auto lkeys = detail::index_by_key(left, level);
  const auto rkeys = detail::index_by_key(right, level);
  out.left_keys = lkeys.size();
  out.right_keys = rkeys.size();

  std::map<PatternKey, SharedMember> admitted;
  auto admit = [&](const PatternKey& k, Side side, const std::string& route) {
    auto& m = admitted[k];
    m.key = k;
    m.provenance.insert(route);
    const auto& src = side == Side::Left ? lkeys : rkeys;
    auto& into = side == Side::Left ? m.left : m.right;
    if (into.empty()) into = src.at(k);
  };

  if (mode == MatchMode::Exact) {
    for (const auto& [k, vs] : lkeys) {
      if (!out.shared_frames.count(k.frame) || !rkeys.count(k)) continue;
      admit(k, Side::Left, "both");
      admit(k, Side::Right, "both");
    }
  } else {
    std::map<std::pair<std::string, std::optional<Voice>>, detail::Bucket> buckets;
    for (const auto& [k, vs] : lkeys) {
      if (!out.shared_frames.count(k.frame)) continue;
      auto& b = buckets[{k.frame, k.voice}];
      b.keys.push_back(&k);
      b.sides.push_back(Side::Left);
    }
    for (const auto& [k, vs] : rkeys) {
      if (!out.shared_frames.count(k.frame)) continue;
      auto& b = buckets[{k.frame, k.voice}];
      b.keys.push_back(&k);
      b.sides.push_back(Side::Right);
    }
    for (auto& [bk, b] : buckets) {
      detail::fill_bits(b);
      for (std::size_t i = 0; i < b.keys.size(); ++i) {
        for (std::size_t j = 0; j < b.keys.size(); ++j) {
          if (b.sides[i] == b.sides[j] || !b.bits[i].is_subset_of(b.bits[j])) continue;
          const bool equal = b.bits[i] == b.bits[j];
          if (b.sides[i] == Side::Left) {
            admit(*b.keys[i], Side::Left, equal ? "both" : "left<right");
          } else {
            admit(*b.keys[i], Side::Right, equal ? "both" : "right<left");
          }
        }
      }
    }
  }

  for (auto& [k, m] : admitted) {
    if (!m.left.empty()) ++out.admitted_left;
    if (!m.right.empty()) ++out.admitted_right;
    out.members.push_back(std::move(m));
  }

  if (opts.prune) {
    std::map<std::pair<std::string, std::optional<Voice>>, detail::Bucket> buckets;
    std::map<const PatternKey*, SharedMember*> owner;
    for (auto& m : out.members) {
      buckets[{m.key.frame, m.key.voice}].keys.push_back(&m.key);
      owner[&m.key] = &m;
    }
    for (auto& [bk, b] : buckets) {
      detail::fill_bits(b);
      for (std::size_t i = 0; i < b.keys.size(); ++i) {
        for (std::size_t j = 0; j < b.keys.size(); ++j) {
          if (i != j && b.bits[i].is_proper_subset_of(b.bits[j])) {
            owner.at(b.keys[i])->final = false;
            break;
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

struct FrameSetReport {
  std::size_t left = 0, right = 0, left_only = 0, right_only = 0, union_size = 0, shared = 0;

  double left_only_pct() const { return percent(left_only, left); }
  double right_only_pct() const { return percent(right_only, right); }
  double shared_pct() const { return percent(shared, union_size); }
};

inline FrameSetReport frame_set_report(const std::vector<ValencePattern>& left, const std::vector<ValencePattern>& right) {
  const auto a = detail::frames_of(left);
  const auto b = detail::frames_of(right);
  std::set<std::string> both, either;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(either, either.end()));
  FrameSetReport r;
  r.left = a.size();
  r.right = b.size();
  r.shared = both.size();
  r.union_size = either.size();
  r.left_only = r.left - r.shared;
  r.right_only = r.right - r.shared;
  return r;
}

inline constexpr std::string_view kFrameReportHeader =
    "settings,left,right,left_only,left_only_pct,right_only,right_only_pct,union,shared,shared_pct";

inline void write_frame_report_csv(std::ostream& out, const std::vector<std::pair<std::string, FrameSetReport>>& rows) {
  out << kFrameReportHeader << '\n';
  for (const auto& [settings, r] : rows) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(1) << settings << ',' << r.left << ',' << r.right << ',' << r.left_only
         << ',' << r.left_only_pct() << ',' << r.right_only << ',' << r.right_only_pct() << ',' << r.union_size << ','
         << r.shared << ',' << r.shared_pct();
    out << line.str() << '\n';
  }
}

struct PatternSetReport {
  std::string settings;
  MatchLevel level = MatchLevel::SemanticSyntactic;
  MatchMode mode = MatchMode::Fuzzy;
  std::size_t left = 0, right = 0, left_only = 0, right_only = 0, union_size = 0, shared = 0;
  std::size_t final_patterns = 0, final_frames = 0;

  double left_only_pct() const { return percent(left_only, left); }
  double right_only_pct() const { return percent(right_only, right); }
  double shared_pct() const { return percent(shared, union_size); }
};

/// A and B count distinct keys; A∩B counts admitted keys (key-equal members from both
/// sides count once); A∖B counts keys of A that were not admitted.
inline PatternSetReport pattern_set_report(const std::string& settings, const SharedPatternSet& s) {
  PatternSetReport r;
  r.settings = settings;
  r.level = s.level;
  r.mode = s.mode;
  r.left = s.left_keys;
  r.right = s.right_keys;
  r.shared = s.members.size();
  r.left_only = s.left_keys - s.admitted_left;
  r.right_only = s.right_keys - s.admitted_right;
  r.union_size = r.left_only + r.right_only + r.shared;
  r.final_patterns = s.finals().size();
  r.final_frames = s.final_frames().size();
  return r;
}

inline constexpr std::string_view kPatternReportHeader =
    "settings,level,mode,left,right,left_only,left_only_pct,right_only,right_only_pct,union,shared,shared_pct,"
    "final_patterns,final_frames";

inline void write_pattern_report_csv(std::ostream& out, const std::vector<PatternSetReport>& rows) {
  out << kPatternReportHeader << '\n';
  for (const auto& r : rows) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(1) << r.settings << ',' << to_string(r.level) << ',' << to_string(r.mode)
         << ',' << r.left << ',' << r.right << ',' << r.left_only << ',' << r.left_only_pct() << ',' << r.right_only
         << ',' << r.right_only_pct() << ',' << r.union_size << ',' << r.shared << ',' << r.shared_pct() << ','
         << r.final_patterns << ',' << r.final_frames;
    out << line.str() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Shared-set TSV
//
//   # level=semsyn mode=fuzzy prune=1 left_keys=N right_keys=N admitted_left=N admitted_right=N
//   # frames=Desiring,...
//   frame  voice  fes  status  left_count  right_count  provenance  valences
//
// voice is "-" for semantic keys; valences is `L:Act:<fe-set>=<count>;R:...`.

namespace detail {

inline std::string format_valence_refs(const SharedMember& m) {
  std::vector<std::string> parts;
  for (auto [tag, vs] : {std::pair{"L", &m.left}, std::pair{"R", &m.right}}) {
    for (const auto& v : *vs) {
      parts.push_back(std::string(tag) + ":" + std::string(to_string(v.voice)) + ":" + v.fe_string() + "=" +
                      std::to_string(v.count));
    }
  }
  return text::join(parts, ";");
}

inline std::map<std::string, std::string> parse_header_fields(const std::string& line) {
  std::map<std::string, std::string> out;
  for (const auto& tok : text::split_nonempty(line.substr(1), ' ')) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

}  // namespace detail

inline void write_shared(std::ostream& out, const SharedPatternSet& s) {
  out << "# level=" << to_string(s.level) << " mode=" << to_string(s.mode) << " prune=" << (s.pruned ? 1 : 0)
      << " left_keys=" << s.left_keys << " right_keys=" << s.right_keys << " admitted_left=" << s.admitted_left
      << " admitted_right=" << s.admitted_right << '\n';
  out << "# frames=" << text::join(s.shared_frames, ",") << '\n';
  for (const auto& m : s.members) {
    out << m.key.frame << '\t' << (m.key.voice ? std::string(to_string(*m.key.voice)) : "-") << '\t'
        << m.key.fe_string() << '\t' << (m.final ? "final" : "subsumed") << '\t' << m.left_count() << '\t'
        << m.right_count() << '\t' << text::join(m.provenance, "+") << '\t' << detail::format_valence_refs(m) << '\n';
  }
}

inline SharedPatternSet read_shared(std::istream& in) {
  SharedPatternSet s;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  auto number = [](const std::map<std::string, std::string>& f, const char* key) -> std::size_t {
    auto it = f.find(key);
    return it == f.end() || !text::all_digits(it->second) ? 0 : std::stoul(it->second);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto where = "shared line " + std::to_string(lineno);
    if (line.front() == '#') {
      auto f = detail::parse_header_fields(line);
      if (f.count("level")) {
        auto level = parse_match_level(f["level"]);
        auto mode = parse_match_mode(f["mode"]);
        if (!level || !mode) throw Error(where + ": bad level/mode header");
        s.level = *level;
        s.mode = *mode;
        s.pruned = f["prune"] != "0";
        s.left_keys = number(f, "left_keys");
        s.right_keys = number(f, "right_keys");
        s.admitted_left = number(f, "admitted_left");
        s.admitted_right = number(f, "admitted_right");
        have_header = true;
      } else if (f.count("frames")) {
        for (auto& fr : text::split_nonempty(f["frames"], ',')) s.shared_frames.insert(std::move(fr));
      }
      continue;
    }
    auto f = text::split(line, '\t');
    if (f.size() != 8) throw Error(where + ": expected 8 tab-separated fields");
    SharedMember m;
    m.key.frame = f[0];
    if (f[1] != "-") {
      auto v = parse_voice(f[1]);
      if (!v) throw Error(where + ": bad voice '" + f[1] + "'");
      m.key.voice = *v;
    }
    m.key.fes = text::split_nonempty(f[2], ',');
    std::sort(m.key.fes.begin(), m.key.fes.end());
    if (f[3] != "final" && f[3] != "subsumed") throw Error(where + ": bad status '" + f[3] + "'");
    m.final = f[3] == "final";
    for (auto& p : text::split_nonempty(f[6], '+')) m.provenance.insert(std::move(p));
    for (const auto& ref : text::split_nonempty(f[7], ';')) {
      auto c1 = ref.find(':');
      auto c2 = c1 == std::string::npos ? c1 : ref.find(':', c1 + 1);
      auto eq = ref.rfind('=');
      if (c2 == std::string::npos || eq == std::string::npos || eq < c2) throw Error(where + ": bad valence '" + ref + "'");
      ValencePattern v;
      v.frame = m.key.frame;
      auto voice = parse_voice(ref.substr(c1 + 1, c2 - c1 - 1));
      const auto count = ref.substr(eq + 1);
      if (!voice || !text::all_digits(count)) throw Error(where + ": bad valence '" + ref + "'");
      v.voice = *voice;
      v.count = std::stoi(count);
      std::vector<FeRealization> fes;
      for (const auto& tok : text::split_nonempty(ref.substr(c2 + 1, eq - c2 - 1), ',')) fes.push_back(parse_fe_token(tok));
      v.fes = valence_fes(fes);
      const auto side = ref.substr(0, c1);
      if (side == "L") m.left.push_back(std::move(v));
      else if (side == "R") m.right.push_back(std::move(v));
      else throw Error(where + ": bad side '" + side + "'");
    }
    s.members.push_back(std::move(m));
  }
  if (!have_header) throw Error("shared set: missing '# level=... mode=...' header");
  std::sort(s.members.begin(), s.members.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return s;
}

}  // namespace fngram
