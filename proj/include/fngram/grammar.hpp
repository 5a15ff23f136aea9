#pragma once

// Abstract syntax derivation: FE category module, frame function module and one LU
// module per framenet, emitted as GF abstract-syntax text.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "fngram/aggregate.hpp"
#include "fngram/compare.hpp"
#include "fngram/patterns.hpp"
#include "fngram/text.hpp"
#include "fngram/types.hpp"

namespace fngram {

enum class VerbArity { V, V2, V3 };

inline std::string_view to_string(VerbArity a) {
  switch (a) {
    case VerbArity::V: return "V";
    case VerbArity::V2: return "V2";
    case VerbArity::V3: return "V3";
  }
  return "";
}

/// Obj-function FEs plus VP-typed FEs: 0 -> V, 1 -> V2, 2+ -> V3. Non-core FEs do not count.
inline VerbArity verb_arity_of(const std::vector<FeRealization>& fes) {
  int c = 0;
  for (const auto& f : fes) {
    if (f.coreness == Coreness::NonCore) continue;
    if (f.function == SynFunction::Obj || f.rgl_type() == RglType::VP) ++c;
  }
  return c == 0 ? VerbArity::V : c == 1 ? VerbArity::V2 : VerbArity::V3;
}

inline VerbArity choose_verb_arity(const ValencePattern& p) { return verb_arity_of(p.fes); }

struct FeCategory {
  std::string name;
  RglType rgl_type = RglType::NP;
  bool optional = false;

  friend bool operator==(const FeCategory&, const FeCategory&) = default;
};

struct FrameFunction {
  std::string name;
  std::string frame;
  Voice voice = Voice::Act;
  int number = 0;
  std::vector<std::string> args;
  VerbArity verb_arity = VerbArity::V;
  int count = 0;

  std::string signature() const {
    std::string s;
    for (const auto& a : args) s += a + " -> ";
    s += std::string(to_string(verb_arity)) + " -> Clause";
    return s;
  }

  friend bool operator==(const FrameFunction&, const FrameFunction&) = default;
};

struct LuFunction {
  std::string name;
  std::string lemma;
  VerbArity verb_arity = VerbArity::V;
  std::string frame;
  std::string framenet;
  std::set<std::string> sources;  // original LU references

  friend bool operator==(const LuFunction&, const LuFunction&) = default;
};

struct GrammarOptions {
  bool include_noncore = false;
};

namespace detail {

inline void require_semsyn(const SharedPatternSet& s) {
  if (s.level != MatchLevel::SemanticSyntactic) {
    throw Error("grammar generation needs a semantic-syntactic shared set, got level '" +
                std::string(to_string(s.level)) + "'");
  }
}

inline bool is_optional_category(std::string_view name) { return name.substr(0, 4) == "Opt_"; }

inline FeCategory parse_category(const std::string& name) {
  const auto us = name.rfind('_');
  std::optional<RglType> t;
  if (us != std::string::npos) t = parse_rgl_type(std::string_view(name).substr(us + 1));
  if (!t) throw Error("FE category '" + name + "' has no interlingual type");
  return FeCategory{name, *t, is_optional_category(name)};
}

}  // namespace detail

/// One category per distinct `[Opt_]<FE>_<Type>` used by the final patterns, sorted.
inline std::vector<FeCategory> derive_fe_categories(const SharedPatternSet& shared, GrammarOptions opts = {}) {
  detail::require_semsyn(shared);
  std::set<std::string> names;
  for (const auto* m : shared.finals()) {
    for (const auto& fe : m->key.fes) {
      if (opts.include_noncore || !detail::is_optional_category(fe)) names.insert(fe);
    }
  }
  std::vector<FeCategory> out;
  for (const auto& n : names) out.push_back(detail::parse_category(n));
  return out;
}

/// One function per final (frame, FE set, voice). Pattern numbers are per frame, by
/// combined count over both sides and voices (descending), then FE-set string.
inline std::vector<FrameFunction> derive_frame_functions(const SharedPatternSet& shared, GrammarOptions opts = {}) {
  detail::require_semsyn(shared);
  struct VoiceEntry {
    int count = 0;
    VerbArity arity = VerbArity::V;
  };
  std::map<std::pair<std::string, std::vector<std::string>>, std::map<Voice, VoiceEntry>> sets;
  for (const auto* m : shared.finals()) {
    std::vector<std::string> args;
    for (const auto& fe : m->key.fes) {
      if (opts.include_noncore || !detail::is_optional_category(fe)) args.push_back(fe);
    }
    auto& e = sets[{m->key.frame, args}][m->key.voice.value_or(Voice::Act)];
    e.count += m->left_count() + m->right_count();
    for (const auto* vs : {&m->left, &m->right}) {
      for (const auto& v : *vs) e.arity = std::max(e.arity, choose_verb_arity(v));
    }
  }

  struct Ranked {
    std::string frame;
    std::vector<std::string> args;
    int total;
    const std::map<Voice, VoiceEntry>* voices;
  };
  std::map<std::string, std::vector<Ranked>> by_frame;
  for (const auto& [key, voices] : sets) {
    int total = 0;
    for (const auto& [v, e] : voices) total += e.count;
    by_frame[key.first].push_back({key.first, key.second, total, &voices});
  }

  std::vector<FrameFunction> out;
  for (auto& [frame, ranked] : by_frame) {
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
      if (a.total != b.total) return a.total > b.total;
      return text::join(a.args, ",") < text::join(b.args, ",");
    });
    int n = 0;
    for (const auto& r : ranked) {
      ++n;
      const bool both = r.voices->size() > 1;
      for (const auto& [voice, e] : *r.voices) {
        FrameFunction f;
        f.frame = frame;
        f.voice = voice;
        f.number = n;
        f.args = r.args;
        f.verb_arity = e.arity;
        f.count = e.count;
        f.name = frame + "_P" + std::to_string(n) + (both ? "_" + std::string(to_string(voice)) : "");
        out.push_back(std::move(f));
      }
    }
  }
  return out;
}

/// GF identifier from an LU lemma: letters (including non-ASCII), digits and '_'
/// are kept, everything else becomes '_'.
inline std::string transliterate_identifier(std::string_view lemma) {
  std::string out;
  std::size_t i = 0;
  while (i < lemma.size()) {
    const auto c = static_cast<unsigned char>(lemma[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    if (i + len > lemma.size()) len = 1;
    if (c < 0x80) {
      out += (std::isalnum(c) || c == '_') ? static_cast<char>(c) : '_';
    } else {
      std::uint32_t cp = len == 2 ? c & 0x1F : len == 3 ? c & 0x0F : c & 0x07;
      for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(lemma[i + k]) & 0x3F);
      // Latin-1 punctuation, symbols and the multiplication/division signs are not letters.
      const bool letter = len > 1 && cp >= 0xC0 && cp != 0xD7 && cp != 0xF7 && !(cp >= 0x2000 && cp <= 0x2BFF);
      if (letter) out.append(lemma.substr(i, len));
      else out += '_';
    }
    i += len;
  }
  return out;
}

/// LU functions for one framenet over the frames in `frames`, with the maximum arity
/// attested for each (lemma, frame).
inline std::vector<LuFunction> derive_lu_module(const std::vector<SentencePattern>& patterns,
                                               const std::set<std::string>& frames, const std::string& framenet) {
  std::map<std::pair<std::string, std::string>, LuFunction> fns;  // (identifier, frame)
  std::map<std::pair<std::string, std::string>, std::set<std::string>> lemmas;
  for (const auto& p : patterns) {
    if (!frames.count(p.frame)) continue;
    const auto lu = parse_lu_ref(p.lu_ref);
    const auto ident = transliterate_identifier(lu.lemma);
    auto& f = fns[{ident, p.frame}];
    if (f.framenet.empty()) {
      f.lemma = ident;
      f.frame = p.frame;
      f.framenet = framenet;
      f.verb_arity = VerbArity::V;
    }
    f.verb_arity = std::max(f.verb_arity, verb_arity_of(p.realizations));
    f.sources.insert(p.lu_ref);
    lemmas[{ident, p.frame}].insert(lu.lemma);
  }
  std::vector<std::string> collisions;
  std::set<std::string> seen;
  for (const auto& [key, ls] : lemmas) {
    if (ls.size() > 1 && seen.insert(key.first).second) {
      collisions.push_back(key.first + " <- " + text::join(ls, " | "));
    }
  }
  if (!collisions.empty()) {
    throw Error("LU module " + framenet + ": identifier collision after transliteration: " +
                text::join(collisions, "; "));
  }
  std::vector<LuFunction> out;
  for (auto& [key, f] : fns) {
    f.name = f.lemma + "_" + std::string(to_string(f.verb_arity)) + "_" + f.frame;
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const LuFunction& a, const LuFunction& b) { return a.name < b.name; });
  return out;
}

struct InputDigest {
  std::string name;
  std::string sha256;
};

struct GrammarHeader {
  std::string settings;
  std::vector<InputDigest> inputs;
};

struct AbstractGrammar {
  GrammarHeader header;
  std::vector<FeCategory> categories;
  std::vector<FrameFunction> functions;
  std::map<std::string, std::vector<LuFunction>> lu_modules;  // framenet -> functions
};

/// Frames whose attested verbs in a module are all particle verbs (multi-word lemmas).
inline std::vector<std::string> particle_only_frames(const std::vector<LuFunction>& fns) {
  std::map<std::string, bool> all_particle;
  for (const auto& f : fns) {
    bool particle = false;
    for (const auto& src : f.sources) {
      const auto lemma = parse_lu_ref(src).lemma;
      particle |= lemma.find_first_of(" _") != std::string::npos;
    }
    auto [it, fresh] = all_particle.emplace(f.frame, particle);
    if (!fresh) it->second = it->second && particle;
  }
  std::vector<std::string> out;
  for (const auto& [frame, p] : all_particle) {
    if (p) out.push_back(frame);
  }
  return out;
}

/// Checks the closed-world and uniqueness invariants; throws on violation.
inline void check_grammar(const AbstractGrammar& g) {
  std::set<std::string> cats;
  for (const auto& c : g.categories) {
    if (!cats.insert(c.name).second) throw Error("duplicate category " + c.name);
  }
  std::set<std::string> names;
  std::set<std::tuple<std::string, std::vector<std::string>, Voice>> sigs;
  for (const auto& f : g.functions) {
    if (!names.insert(f.name).second) throw Error("duplicate function " + f.name);
    if (!sigs.insert({f.frame, f.args, f.voice}).second) throw Error("duplicate signature for " + f.name);
    if (!std::is_sorted(f.args.begin(), f.args.end()) ||
        std::adjacent_find(f.args.begin(), f.args.end()) != f.args.end()) {
      throw Error("arguments of " + f.name + " are not in strict alphabetical order");
    }
    for (const auto& a : f.args) {
      if (!cats.count(a)) throw Error("function " + f.name + " uses undeclared category " + a);
    }
  }
  for (const auto& [fn, lus] : g.lu_modules) {
    std::set<std::string> lu_names;
    for (const auto& l : lus) {
      if (!lu_names.insert(l.name).second) throw Error("duplicate LU function " + l.name + " in " + fn);
    }
  }
}

inline AbstractGrammar build_grammar(const SharedPatternSet& shared,
                                     const std::vector<std::pair<std::string, std::vector<SentencePattern>>>& lu_evidence,
                                     GrammarHeader header, GrammarOptions opts = {}) {
  AbstractGrammar g;
  g.header = std::move(header);
  g.categories = derive_fe_categories(shared, opts);
  g.functions = derive_frame_functions(shared, opts);
  const auto frames = shared.final_frames();
  for (const auto& [framenet, patterns] : lu_evidence) {
    g.lu_modules[framenet] = derive_lu_module(patterns, frames, framenet);
  }
  check_grammar(g);
  return g;
}

namespace detail {

inline std::string header_comment(const GrammarHeader& h, std::string_view module) {
  std::ostringstream out;
  out << "-- " << module << '\n';
  out << "-- generated by " << kToolName << ' ' << kToolVersion << '\n';
  if (!h.settings.empty()) out << "-- settings: " << h.settings << '\n';
  for (const auto& in : h.inputs) out << "-- input " << in.name << " sha256:" << in.sha256 << '\n';
  return out.str();
}

}  // namespace detail

/// File name -> content for the FE module, the frame module and each LU module.
inline std::map<std::string, std::string> emit_abstract_syntax(const AbstractGrammar& g) {
  std::map<std::string, std::string> files;
  {
    std::ostringstream out;
    out << detail::header_comment(g.header, "FrameFE");
    out << '\n';
    for (const auto& c : g.categories) out << "cat " << c.name << " ;\n";
    files["FrameFE.gf-abs.txt"] = out.str();
  }
  {
    auto fns = g.functions;
    std::sort(fns.begin(), fns.end(), [](const FrameFunction& a, const FrameFunction& b) {
      return std::tie(a.frame, a.number, a.voice) < std::tie(b.frame, b.number, b.voice);
    });
    std::ostringstream out;
    out << detail::header_comment(g.header, "Frames");
    out << "-- Clause is {np : NP ; vp : VP} in the concrete syntaxes\n";
    out << '\n';
    out << "cat Clause ;\n";
    if (!fns.empty()) out << '\n';
    for (const auto& f : fns) out << "fun " << f.name << " : " << f.signature() << " ;\n";
    files["Frames.gf-abs.txt"] = out.str();
  }
  for (const auto& [framenet, lus] : g.lu_modules) {
    std::ostringstream out;
    out << detail::header_comment(g.header, "LU_" + framenet);
    for (const auto& frame : particle_only_frames(lus)) out << "-- only particle verbs attested for " << frame << '\n';
    out << '\n';
    for (const auto& l : lus) {
      out << "fun " << l.name << " : " << to_string(l.verb_arity) << " ; -- " << text::join(l.sources, " ") << '\n';
    }
    files["LU_" + framenet + ".gf-abs.txt"] = out.str();
  }
  return files;
}

}  // namespace fngram
