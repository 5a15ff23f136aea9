#pragma once

// Turns AnnotatedSentences into SentencePatterns: voice detection, per-FE type
// generalization into NP / Adv / VP, subject/object marking and coreness.

#include <algorithm>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "fngram/corpus.hpp"
#include "fngram/frame_index.hpp"
#include "fngram/patterns.hpp"
#include "fngram/text.hpp"
#include "fngram/types.hpp"
#include "fngram/voice_rules.hpp"

namespace fngram {

enum class SkipReason {
  UnconsideredPhraseType,
  Subclause,
  MixedRepeatedFeTypes,
  NoGrammaticalAnnotation,
  UnknownFrame,
  NonVerbTarget,
};

inline std::string_view to_string(SkipReason r) {
  switch (r) {
    case SkipReason::UnconsideredPhraseType: return "UnconsideredPhraseType";
    case SkipReason::Subclause: return "Subclause";
    case SkipReason::MixedRepeatedFeTypes: return "MixedRepeatedFeTypes";
    case SkipReason::NoGrammaticalAnnotation: return "NoGrammaticalAnnotation";
    case SkipReason::UnknownFrame: return "UnknownFrame";
    case SkipReason::NonVerbTarget: return "NonVerbTarget";
  }
  return "";
}

struct Skip {
  SkipReason reason;
  std::string detail;
};

struct GeneralizedFe {
  RglType type;
  SynFunction function = SynFunction::None;
  std::optional<std::string> preposition;

  friend bool operator==(const GeneralizedFe&, const GeneralizedFe&) = default;
};

using Generalization = std::variant<GeneralizedFe, Skip>;

/// Framenet-native tags (settings 0.0 and 1.x) or interlingual types (2.x and 3.x).
enum class TypeRegime { Native, Interlingual };

struct NormalizeOptions {
  TypeRegime regime = TypeRegime::Interlingual;
  bool skip_unconsidered = true;
  VoiceRules rules;
};

struct NormalizeResult {
  std::variant<SentencePattern, Skip> outcome;
  std::vector<std::string> warnings;

  bool emitted() const { return std::holds_alternative<SentencePattern>(outcome); }
  const SentencePattern& pattern() const { return std::get<SentencePattern>(outcome); }
  const Skip& skip() const { return std::get<Skip>(outcome); }
};

namespace detail {

/// "PP[for]" -> ("PP", "for").
inline std::pair<std::string, std::optional<std::string>> split_phrase_type(std::string_view pt) {
  const auto open = pt.find('[');
  if (open == std::string_view::npos || pt.back() != ']') return {std::string(pt), std::nullopt};
  return {std::string(pt.substr(0, open)), text::to_lower(pt.substr(open + 1, pt.size() - open - 2))};
}

inline bool msd_has(const WordAnno& w, std::string_view feature) {
  if (!w.msd) return false;
  for (const auto& f : text::split(*w.msd, '.')) {
    if (f == feature) return true;
  }
  return false;
}

inline const WordAnno* find_ref(std::span<const WordAnno> words, int ref) {
  for (const auto& w : words) {
    if (w.ref == ref) return &w;
  }
  return nullptr;
}

/// The word of an FE whose dependency head lies outside the FE.
inline const WordAnno* fe_head(std::span<const WordAnno> words) {
  for (const auto& w : words) {
    if (!w.dephead || !find_ref(words, *w.dephead)) return &w;
  }
  return nullptr;
}

inline bool one_of(std::string_view s, std::initializer_list<std::string_view> options) {
  return std::find(options.begin(), options.end(), s) != options.end();
}

/// First-constituent selection shared by the interlingual and native SweFN rules.
struct SwefnConstituent {
  const WordAnno* word = nullptr;
  bool after_infinitive_marker = false;
};

inline SwefnConstituent swefn_constituent(std::span<const WordAnno> words) {
  SwefnConstituent c;
  std::size_t i = 0;
  while (i < words.size() && one_of(words[i].pos, {"KN", "IE"})) {
    c.after_infinitive_marker = words[i].pos == "IE";
    ++i;
  }
  if (i == words.size()) return c;
  c.word = &words[i];
  // Modifier-initial FEs (adjective, participle, determiner, numeral, possessive)
  // are classified by the FE head instead.
  if (one_of(c.word->pos, {"JJ", "PC", "DT", "RG", "RO", "PS"})) {
    if (const auto* head = fe_head(words); head && head != c.word) c.word = head;
  }
  return c;
}

inline std::string swefn_native_tag(const WordAnno& w) {
  std::string tag = w.pos;
  if (w.pos == "VB" && w.msd) {
    auto parts = text::split(*w.msd, '.');
    if (parts.size() > 1) tag += "." + parts[1];
  }
  return tag + "." + w.deprel;
}

}  // namespace detail

/// Generalizes one BFN phrase type / grammatical function pair.
inline Generalization generalize_bfn_fe(std::string_view pt, std::string_view gf) {
  const auto [base, prep] = detail::split_phrase_type(pt);
  if (base == "PP" && gf == "Obj") return GeneralizedFe{RglType::NP, SynFunction::Obj, std::nullopt};
  if (base == "PP" || base == "AVP" || base == "AJP") {
    return GeneralizedFe{RglType::Adv, SynFunction::None, base == "PP" ? prep : std::nullopt};
  }
  if (base == "NP") {
    if (gf == "Ext") return GeneralizedFe{RglType::NP, SynFunction::Subj, std::nullopt};
    if (gf == "Obj") return GeneralizedFe{RglType::NP, SynFunction::Obj, std::nullopt};
    return GeneralizedFe{RglType::Adv, SynFunction::None, std::nullopt};
  }
  if (base == "VPto") return GeneralizedFe{RglType::VP, SynFunction::None, std::nullopt};
  return Skip{SkipReason::UnconsideredPhraseType, "PT=" + std::string(pt) + " GF=" + std::string(gf)};
}

/// Generalizes one SweFN FE from the annotation of its first constituent.
inline Generalization generalize_swefn_fe(std::span<const WordAnno> words, int target_ref) {
  if (words.empty()) return Skip{SkipReason::NoGrammaticalAnnotation, "FE without words"};
  const auto c = detail::swefn_constituent(words);
  if (!c.word) return Skip{SkipReason::UnconsideredPhraseType, "FE of conjunctions only"};
  const auto& w = *c.word;
  const std::string tags = w.pos + "." + w.deprel;

  if (detail::one_of(w.pos, {"SN", "HA", "HP", "HD", "HS"})) return Skip{SkipReason::Subclause, tags};
  if (w.pos == "PP") return GeneralizedFe{RglType::Adv, SynFunction::None, text::to_lower(w.surface)};
  if (detail::one_of(w.pos, {"NN", "PN", "PM", "JJ", "PC"})) {
    if (w.deprel == "SS") return GeneralizedFe{RglType::NP, SynFunction::Subj, std::nullopt};
    if (w.deprel == "OO" || w.deprel == "IO") return GeneralizedFe{RglType::NP, SynFunction::Obj, std::nullopt};
    return GeneralizedFe{RglType::Adv, SynFunction::None, std::nullopt};
  }
  if (w.pos == "AB") return GeneralizedFe{RglType::Adv, SynFunction::None, std::nullopt};
  if (w.pos == "VB") {
    if (detail::msd_has(w, "INF") && (w.deprel == "VG" || w.deprel == "OO" || c.after_infinitive_marker)) {
      return GeneralizedFe{RglType::VP, SynFunction::None, std::nullopt};
    }
    const bool finite = detail::msd_has(w, "PRS") || detail::msd_has(w, "PRT") ||
                        detail::msd_has(w, "IMP") || detail::msd_has(w, "KON");
    const bool in_target_chain = w.deprel == "VG" && w.dephead && *w.dephead == target_ref;
    if (finite && !in_target_chain) return Skip{SkipReason::Subclause, tags};
  }
  return Skip{SkipReason::UnconsideredPhraseType, tags + (w.msd ? " msd=" + *w.msd : "")};
}

/// Passive iff the configured heuristic fires; NoGrammaticalAnnotation when the
/// target carries no POS/MSD tag.
inline std::variant<Voice, Skip> detect_voice(const AnnotatedSentence& s, const VoiceRules& rules) {
  if (s.dialect == Dialect::BfnPhrase) {
    const auto& r = rules.bfn;
    const PosLabel* target = nullptr;
    for (const auto& p : s.pos_labels) {
      if (p.span.start >= s.target.start && p.span.start <= s.target.end) {
        target = &p;
        break;
      }
    }
    if (!target || target->tag.empty()) {
      return Skip{SkipReason::NoGrammaticalAnnotation, "target has no POS label"};
    }
    if (!r.participle_tags.count(target->tag)) return Voice::Act;

    const auto cps = text::code_point_offsets(s.text);
    std::vector<const PosLabel*> before;
    for (const auto& p : s.pos_labels) {
      if (p.span.end < s.target.start) before.push_back(&p);
    }
    bool aux = false;
    const auto window = static_cast<std::size_t>(std::max(0, r.window));
    for (std::size_t i = before.size() > window ? before.size() - window : 0; i < before.size(); ++i) {
      const auto* p = before[i];
      const auto surface = p->span.end + 1 < cps.size()
                               ? text::to_lower(text::code_point_slice(s.text, cps, p->span.start, p->span.end))
                               : std::string();
      if (r.auxiliary_tags.count(p->tag) || r.auxiliaries.count(surface)) aux = true;
    }
    bool agent = false;
    for (const auto& fe : s.fe_spans) {
      if (fe.null_instantiated || !fe.phrase_type) continue;
      const auto [base, prep] = detail::split_phrase_type(*fe.phrase_type);
      if (base == "PP" && prep && *prep == r.agent_preposition) agent = true;
    }
    return aux || agent ? Voice::Pass : Voice::Act;
  }

  const auto& r = rules.swefn;
  if (s.target_refs.empty()) return Skip{SkipReason::NoGrammaticalAnnotation, "no target token"};
  const auto* target = detail::find_ref(s.words, s.target_refs.front());
  if (!target || (target->pos.empty() && !target->msd)) {
    return Skip{SkipReason::NoGrammaticalAnnotation, "target has no POS/MSD"};
  }
  for (const auto& m : r.passive_msd_markers) {
    if (detail::msd_has(*target, m)) return Voice::Pass;
  }
  const bool participle = target->msd && target->msd->rfind(r.participle_msd_prefix, 0) == 0;
  if (participle) {
    // Walk up from the participle through its verb-group chain looking for a passive auxiliary.
    const WordAnno* cur = target;
    for (std::size_t guard = 0; cur && cur->dephead && guard < s.words.size(); ++guard) {
      const auto* head = detail::find_ref(s.words, *cur->dephead);
      if (!head) break;
      if (r.passive_auxiliaries.count(text::to_lower(head->surface))) return Voice::Pass;
      if (head->deprel != "VG") break;
      cur = head;
    }
  }
  return Voice::Act;
}

/// Full per-sentence transformation. Throws CorenessError when an FE of a known
/// frame is missing from the index.
inline NormalizeResult extract_sentence_pattern(const AnnotatedSentence& s, const FrameIndex& index,
                                                const NormalizeOptions& opts = {}) {
  NormalizeResult result{Skip{SkipReason::UnknownFrame, ""}, {}};
  if (!index.contains(s.frame)) {
    result.outcome = Skip{SkipReason::UnknownFrame, s.frame};
    return result;
  }
  if (!is_verb_lu(s.lu_ref)) {
    result.outcome = Skip{SkipReason::NonVerbTarget, s.lu_ref};
    return result;
  }
  const auto voice_or_skip = detect_voice(s, opts.rules);
  if (const auto* skip = std::get_if<Skip>(&voice_or_skip)) {
    result.outcome = *skip;
    return result;
  }
  const Voice voice = std::get<Voice>(voice_or_skip);

  std::vector<const FeSpan*> fes;
  for (const auto& fe : s.fe_spans) {
    if (!fe.null_instantiated && fe.span) fes.push_back(&fe);
  }
  std::stable_sort(fes.begin(), fes.end(), [](const FeSpan* a, const FeSpan* b) {
    return a->span->start != b->span->start ? a->span->start < b->span->start : a->span->end < b->span->end;
  });

  const int target_ref = s.target_refs.empty() ? -1 : s.target_refs.front();
  const auto cps = text::code_point_offsets(s.text);
  const bool native = opts.regime == TypeRegime::Native;

  SentencePattern pattern;
  pattern.frame = s.frame;
  pattern.voice = voice;
  pattern.lu_ref = s.lu_ref;
  pattern.sentence_id = s.sentence_id;

  for (const auto* fe : fes) {
    FeRealization real;
    real.fe_name = fe->fe_name;
    real.coreness = index.coreness(s.frame, fe->fe_name);

    Generalization g = Skip{SkipReason::NoGrammaticalAnnotation, ""};
    std::string native_type;
    std::optional<std::string> native_prep;

    if (s.dialect == Dialect::BfnPhrase) {
      if (!fe->phrase_type) {
        result.outcome = Skip{SkipReason::NoGrammaticalAnnotation, fe->fe_name + " has no phrase type"};
        return result;
      }
      const std::string& pt = *fe->phrase_type;
      std::string gf = fe->gram_function.value_or("");
      const auto [base, bracket] = detail::split_phrase_type(pt);
      native_type = gf.empty() ? base : base + "." + gf;
      native_prep = bracket;
      // In a passive clause the by-phrase agent is the object-side participant.
      if (voice == Voice::Pass && base == "PP" && bracket == opts.rules.bfn.agent_preposition) gf = "Obj";
      g = generalize_bfn_fe(pt, gf);
      if (auto* gen = std::get_if<GeneralizedFe>(&g);
          gen && gen->type == RglType::Adv && base == "PP" && !gen->preposition) {
        for (const auto& p : s.pos_labels) {
          if (p.span.start == fe->span->start && opts.rules.bfn.prepositional_tags.count(p.tag) &&
              p.span.end + 1 < cps.size()) {
            gen->preposition = text::to_lower(text::code_point_slice(s.text, cps, p.span.start, p.span.end));
            break;
          }
        }
      }
    } else {
      g = generalize_swefn_fe(fe->words, target_ref);
      const auto c = detail::swefn_constituent(fe->words);
      const WordAnno& w = c.word ? *c.word : fe->words.front();
      native_type = detail::swefn_native_tag(w);
      if (w.pos == "PP") native_prep = text::to_lower(w.surface);
      if (auto* gen = std::get_if<GeneralizedFe>(&g); gen && voice == Voice::Pass && gen->type == RglType::Adv &&
                                                       c.word && c.word->pos == "PP" &&
                                                       (gen->preposition == opts.rules.swefn.agent_preposition ||
                                                        c.word->deprel == opts.rules.swefn.agent_deprel)) {
        *gen = GeneralizedFe{RglType::NP, SynFunction::Obj, std::nullopt};
      }
    }

    if (const auto* skip = std::get_if<Skip>(&g)) {
      if (!native || opts.skip_unconsidered) {
        result.outcome = Skip{skip->reason, fe->fe_name + ": " + skip->detail};
        return result;
      }
    }
    if (native) {
      real.type = native_type;
      real.preposition = native_prep;
    } else {
      const auto& gen = std::get<GeneralizedFe>(g);
      real.type = std::string(to_string(gen.type));
      real.function = gen.function;
      real.preposition = gen.preposition;
    }
    pattern.realizations.push_back(std::move(real));
  }

  // Annotation noise: a second subject (or a third object) is demoted to a modifier.
  int subjects = 0, objects = 0;
  for (auto& r : pattern.realizations) {
    const bool extra = (r.function == SynFunction::Subj && ++subjects > 1) ||
                       (r.function == SynFunction::Obj && ++objects > 2);
    if (extra) {
      result.warnings.push_back(s.sentence_id + ": demoted extra " + std::string(to_string(r.function)) + " " +
                                r.fe_name + " to Adv");
      r.type = "Adv";
      r.function = SynFunction::None;
    }
  }

  result.outcome = std::move(pattern);
  return result;
}

struct SkippedSentence {
  std::string sentence_id;
  std::string frame;
  Skip skip;
};

struct NormalizeBatch {
  std::vector<SentencePattern> patterns;
  std::vector<SkippedSentence> skipped;
  std::vector<std::string> warnings;
};

/// Normalizes a corpus; work is split across threads and collected in input order.
inline NormalizeBatch normalize_corpus(const std::vector<AnnotatedSentence>& sentences, const FrameIndex& index,
                                       const NormalizeOptions& opts = {}, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = sentences.size();
  const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 2048));
  std::vector<std::future<std::vector<NormalizeResult>>> parts;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
    parts.push_back(std::async(chunks == 1 ? std::launch::deferred : std::launch::async, [&, lo, hi] {
      std::vector<NormalizeResult> out;
      out.reserve(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) out.push_back(extract_sentence_pattern(sentences[i], index, opts));
      return out;
    }));
  }
  NormalizeBatch batch;
  std::size_t i = 0;
  for (auto& part : parts) {
    for (auto& r : part.get()) {
      const auto& s = sentences[i++];
      batch.warnings.insert(batch.warnings.end(), r.warnings.begin(), r.warnings.end());
      if (r.emitted()) {
        batch.patterns.push_back(std::get<SentencePattern>(std::move(r.outcome)));
      } else {
        batch.skipped.push_back({s.sentence_id, s.frame, r.skip()});
      }
    }
  }
  return batch;
}

inline void write_skips(std::ostream& out, const std::vector<SkippedSentence>& skipped) {
  for (const auto& s : skipped) {
    out << s.sentence_id << '\t' << s.frame << '\t' << to_string(s.skip.reason) << '\t' << s.skip.detail << '\n';
  }
}

}  // namespace fngram
