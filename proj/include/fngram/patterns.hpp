#pragma once

// Sentence patterns: the uniform intermediate line format shared by both framenets.
//
//   <Frame>\t<Act|Pass>\t<fe1 fe2 ...>\t<lu_ref>\t<sentence_id>
//
// Each FE token is [Opt_]<FEName>_<Type>[.Subj|.Obj][[<prep>]], where Type is an
// interlingual type (NP, Adv, VP) or, under the framenet-native regimes, the
// corpus's own tag (e.g. VPto.Dep, PN.SS).

#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fngram/text.hpp"
#include "fngram/types.hpp"

namespace fngram {

struct FeRealization {
  std::string fe_name;
  std::string type;
  SynFunction function = SynFunction::None;
  std::optional<std::string> preposition;
  Coreness coreness = Coreness::Core;

  std::optional<RglType> rgl_type() const { return parse_rgl_type(type); }

  /// FE name with the Opt_ prefix marking non-core FEs.
  std::string display_name() const {
    return coreness == Coreness::NonCore ? "Opt_" + fe_name : fe_name;
  }
  /// Semantic-syntactic category, e.g. Focal_participant_NP.
  std::string category() const { return display_name() + "_" + type; }
  /// Order- and preposition-free token, e.g. Experiencer_NP.Subj.
  std::string valence_token() const {
    auto t = category();
    if (function != SynFunction::None) t += "." + std::string(to_string(function));
    return t;
  }
  std::string token() const {
    auto t = valence_token();
    if (preposition) t += "[" + *preposition + "]";
    return t;
  }

  friend bool operator==(const FeRealization&, const FeRealization&) = default;
};

struct SentencePattern {
  std::string frame;
  Voice voice = Voice::Act;
  std::vector<FeRealization> realizations;
  std::string lu_ref;
  std::string sentence_id;

  std::string fe_string() const {
    std::vector<std::string> tokens;
    for (const auto& r : realizations) tokens.push_back(r.token());
    return text::join(tokens, " ");
  }

  friend bool operator==(const SentencePattern&, const SentencePattern&) = default;
};

/// Inverse of FeRealization::token().
inline FeRealization parse_fe_token(std::string_view token) {
  FeRealization r;
  std::string_view t = token;
  if (!t.empty() && t.back() == ']') {
    const auto open = t.rfind('[');
    if (open == std::string_view::npos) throw Error("bad FE token '" + std::string(token) + "'");
    r.preposition = std::string(t.substr(open + 1, t.size() - open - 2));
    t = t.substr(0, open);
  }
  if (t.find_first_of("[]") != std::string_view::npos) throw Error("bad FE token '" + std::string(token) + "'");
  const auto us = t.rfind('_');
  if (us == std::string_view::npos || us == 0 || us + 1 == t.size()) {
    throw Error("bad FE token '" + std::string(token) + "'");
  }
  std::string_view name = t.substr(0, us);
  std::string_view type = t.substr(us + 1);
  for (auto [suffix, fn] : {std::pair{std::string_view(".Subj"), SynFunction::Subj},
                            std::pair{std::string_view(".Obj"), SynFunction::Obj}}) {
    if (type.size() > suffix.size() && type.substr(type.size() - suffix.size()) == suffix &&
        parse_rgl_type(type.substr(0, type.size() - suffix.size()))) {
      r.function = fn;
      type = type.substr(0, type.size() - suffix.size());
      break;
    }
  }
  if (name.substr(0, 4) == "Opt_" && name.size() > 4) {
    r.coreness = Coreness::NonCore;
    name = name.substr(4);
  }
  r.fe_name = std::string(name);
  r.type = std::string(type);
  return r;
}

/// Lemma and part-of-speech parsed from an LU reference such as want.v.6412,
/// känna_för.vb.1 or vilja..1. Sense numbers are dropped; `pos` may be empty.
struct LuName {
  std::string lemma;
  std::string pos;
};

inline LuName parse_lu_ref(std::string_view lu_ref) {
  static const std::set<std::string, std::less<>> kPosTags{
      "v", "vb", "n", "nn", "a", "av", "adv", "prep", "num", "art", "c", "scon",
      "intj", "pron", "idio", "ab", "jj", "pm", "pp", "pn", "kn"};
  auto parts = text::split(lu_ref, '.');
  while (parts.size() > 1 && (text::all_digits(parts.back()) || parts.back().empty())) parts.pop_back();
  LuName out;
  if (parts.size() > 1 && kPosTags.count(text::to_lower(parts.back()))) {
    out.pos = text::to_lower(parts.back());
    parts.pop_back();
  }
  out.lemma = text::join(parts, ".");
  return out;
}

/// True unless the LU carries a non-verb part of speech.
inline bool is_verb_lu(std::string_view lu_ref) {
  const auto pos = parse_lu_ref(lu_ref).pos;
  return pos.empty() || pos == "v" || pos == "vb";
}

inline std::string format_pattern_line(const SentencePattern& p) {
  std::string line = p.frame;
  line += '\t';
  line += to_string(p.voice);
  line += '\t';
  line += p.fe_string();
  line += '\t';
  line += p.lu_ref;
  line += '\t';
  line += p.sentence_id;
  return line;
}

inline SentencePattern parse_pattern_line(std::string_view line) {
  auto fields = text::split(line, '\t');
  if (fields.size() != 5) {
    throw Error("pattern line needs 5 tab-separated fields: '" + std::string(line) + "'");
  }
  SentencePattern p;
  p.frame = fields[0];
  auto v = parse_voice(fields[1]);
  if (!v) throw Error("bad voice '" + fields[1] + "'");
  p.voice = *v;
  for (const auto& tok : text::split_nonempty(fields[2], ' ')) p.realizations.push_back(parse_fe_token(tok));
  p.lu_ref = fields[3];
  p.sentence_id = fields[4];
  return p;
}

inline void write_patterns(std::ostream& out, const std::vector<SentencePattern>& patterns) {
  for (const auto& p : patterns) out << format_pattern_line(p) << '\n';
}

inline std::vector<SentencePattern> read_patterns(std::istream& in) {
  std::vector<SentencePattern> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    try {
      out.push_back(parse_pattern_line(line));
    } catch (const Error& e) {
      throw Error("patterns line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fngram
