#pragma once

// Readers for the two corpus XML dialects and the JSON-lines serialization of
// their framenet-neutral in-memory form.
//
// BFN layout: sentence -> text + annotationSet* -> layer{BNC|PENN, FE, GF, PT, Target}
// -> label{start,end,name}. Offsets are inclusive code point offsets into <text>.
//
// SweFN layout: sentence -> interleaved <w> tokens and <element name=FE> wrappers;
// the element named LU marks the target. Sentence text is the space-joined token
// surfaces, and spans index into it the same way as BFN spans do.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/property_tree/detail/rapidxml.hpp>
#include <json.hpp>

#include "fngram/text.hpp"
#include "fngram/types.hpp"

namespace fngram {

struct WordAnno {
  std::string surface;
  std::string pos;
  std::optional<std::string> msd;
  int ref = 0;
  std::optional<int> dephead;
  std::string deprel;

  friend bool operator==(const WordAnno&, const WordAnno&) = default;
};

/// One label of the BFN part-of-speech layer (BNC or PENN tagset).
struct PosLabel {
  TokenSpan span;
  std::string tag;

  friend bool operator==(const PosLabel&, const PosLabel&) = default;
};

struct FeSpan {
  std::string fe_name;
  std::optional<TokenSpan> span;
  std::optional<std::string> phrase_type;
  std::optional<std::string> gram_function;
  std::vector<WordAnno> words;
  bool null_instantiated = false;

  friend bool operator==(const FeSpan&, const FeSpan&) = default;
};

struct AnnotatedSentence {
  std::string sentence_id;
  std::string text;
  std::string frame;
  TokenSpan target;
  std::string lu_ref;
  std::vector<FeSpan> fe_spans;
  Dialect dialect = Dialect::BfnPhrase;
  // BfnPhrase only: the sentence-level POS layer.
  std::vector<PosLabel> pos_labels;
  // SwefnDep only: every token of the sentence and the refs of the target tokens.
  std::vector<WordAnno> words;
  std::vector<int> target_refs;

  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

/// A record that could not be turned into an AnnotatedSentence.
struct IngestIssue {
  std::string sentence_id;
  std::string message;
};

struct IngestResult {
  std::vector<AnnotatedSentence> sentences;
  std::vector<IngestIssue> issues;
  // Number of target-bearing annotation sets (BFN) or sentence elements (SweFN) seen.
  std::size_t records = 0;
};

namespace detail {

namespace rx = boost::property_tree::detail::rapidxml;
using XmlNode = rx::xml_node<char>;

/// Owns the mutable buffer rapidxml parses in place.
class XmlDocument {
public:
  explicit XmlDocument(std::string_view source) : buffer_(source.begin(), source.end()) {
    buffer_.push_back('\0');
    try {
      doc_.parse<rx::parse_validate_closing_tags>(buffer_.data());
    } catch (const rx::parse_error& e) {
      const auto offset = static_cast<std::size_t>(e.where<char>() - buffer_.data());
      throw ParseError(std::string("malformed XML: ") + e.what(), offset);
    }
  }
  XmlDocument(const XmlDocument&) = delete;
  XmlDocument& operator=(const XmlDocument&) = delete;

  const XmlNode* root() const { return &doc_; }

private:
  std::vector<char> buffer_;
  rx::xml_document<char> doc_;
};

inline std::string_view name_of(const XmlNode* n) { return {n->name(), n->name_size()}; }

inline std::optional<std::string_view> attr(const XmlNode* n, std::string_view name) {
  for (auto* a = n->first_attribute(); a; a = a->next_attribute()) {
    if (std::string_view(a->name(), a->name_size()) == name) {
      return std::string_view(a->value(), a->value_size());
    }
  }
  return std::nullopt;
}

inline std::optional<long> attr_int(const XmlNode* n, std::string_view name) {
  auto v = attr(n, name);
  if (!v) return std::nullopt;
  auto t = text::trim(*v);
  if (t.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    long value = std::stol(std::string(t), &used);
    if (used != t.size()) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::vector<const XmlNode*> children(const XmlNode* n, std::string_view name = {}) {
  std::vector<const XmlNode*> out;
  for (auto* c = n->first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_element && (name.empty() || name_of(c) == name)) out.push_back(c);
  }
  return out;
}

inline void collect_descendants(const XmlNode* n, std::string_view name,
                                std::vector<const XmlNode*>& out) {
  for (auto* c = n->first_node(); c; c = c->next_sibling()) {
    if (c->type() != rx::node_element) continue;
    if (name_of(c) == name) {
      out.push_back(c);
    } else {
      collect_descendants(c, name, out);
    }
  }
}

/// Concatenated character data directly under `n`.
inline std::string text_content(const XmlNode* n) {
  std::string out;
  for (auto* c = n->first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_data || c->type() == rx::node_cdata) {
      out.append(c->value(), c->value_size());
    }
  }
  return out;
}

/// Nearest value of any of `attrs` on `n` or its ancestors.
inline std::optional<std::string> inherited_attr(const XmlNode* n,
                                                 std::initializer_list<std::string_view> attrs) {
  for (auto* cur = n; cur; cur = cur->parent()) {
    if (cur->type() != rx::node_element) continue;
    for (auto a : attrs) {
      if (auto v = attr(cur, a); v && !v->empty()) return std::string(*v);
    }
  }
  return std::nullopt;
}

/// Nearest ancestor (or self) element whose name is one of `names`.
inline const XmlNode* ancestor_named(const XmlNode* n, std::initializer_list<std::string_view> names) {
  for (auto* cur = n; cur; cur = cur->parent()) {
    if (cur->type() != rx::node_element) continue;
    for (auto nm : names) {
      if (name_of(cur) == nm) return cur;
    }
  }
  return nullptr;
}

inline std::optional<std::string> resolve_frame(const XmlNode* n) {
  if (auto f = inherited_attr(n, {"frameName", "frame"})) return f;
  if (auto* fr = ancestor_named(n, {"frame"})) {
    if (auto v = attr(fr, "name")) return std::string(*v);
  }
  return std::nullopt;
}

/// LU reference from annotation attributes or an enclosing lexUnit/lu element.
inline std::optional<std::string> resolve_lu(const XmlNode* n) {
  if (auto name = inherited_attr(n, {"luName", "lu"})) {
    if (auto id = inherited_attr(n, {"luID"})) return *name + "." + *id;
    return name;
  }
  if (auto* lu = ancestor_named(n, {"lexUnit", "lu"})) {
    if (auto v = attr(lu, "name")) {
      std::string ref(*v);
      if (auto id = attr(lu, "ID")) ref += "." + std::string(*id);
      return ref;
    }
  }
  return std::nullopt;
}

struct BfnLabel {
  std::optional<long> start, end;
  std::string name;
  bool itype = false;
};

inline std::vector<BfnLabel> layer_labels(const XmlNode* layer) {
  std::vector<BfnLabel> out;
  for (auto* l : children(layer, "label")) {
    BfnLabel lab;
    lab.start = attr_int(l, "start");
    lab.end = attr_int(l, "end");
    lab.name = std::string(attr(l, "name").value_or(""));
    lab.itype = attr(l, "itype").has_value();
    out.push_back(std::move(lab));
  }
  return out;
}

inline bool primary_rank(const XmlNode* layer) {
  auto rank = attr_int(layer, "rank");
  return !rank || *rank == 1;
}

}  // namespace detail

/// Parses a BFN-layout document. One AnnotatedSentence per annotationSet that has a
/// Target layer; records with out-of-text offsets or no frame are reported in `issues`.
inline IngestResult parse_bfn_corpus(std::string_view source) {
  using namespace detail;
  IngestResult result;
  XmlDocument doc(source);
  std::vector<const XmlNode*> sentences;
  collect_descendants(doc.root(), "sentence", sentences);

  std::size_t ordinal = 0;
  for (const auto* sent : sentences) {
    ++ordinal;
    std::string sid(attr(sent, "ID").value_or(attr(sent, "id").value_or("")));
    if (sid.empty()) sid = "s" + std::to_string(ordinal);
    std::string sentence_text;
    if (auto tn = children(sent, "text"); !tn.empty()) sentence_text = text_content(tn.front());
    const auto cps = text::code_point_offsets(sentence_text);
    const long length = static_cast<long>(cps.size() - 1);
    auto in_text = [&](const BfnLabel& l) {
      return l.start && l.end && *l.start >= 0 && *l.start <= *l.end && *l.end < length;
    };

    const auto sets = children(sent, "annotationSet");

    // Sentence-level POS layer: the first BNC/PENN layer of any annotation set.
    std::vector<PosLabel> pos_labels;
    for (const auto* set : sets) {
      for (const auto* layer : children(set, "layer")) {
        auto lname = attr(layer, "name").value_or("");
        if (lname != "BNC" && lname != "PENN") continue;
        for (const auto& l : layer_labels(layer)) {
          if (in_text(l)) {
            pos_labels.push_back({{static_cast<std::size_t>(*l.start), static_cast<std::size_t>(*l.end)},
                                  l.name});
          }
        }
        break;
      }
      if (!pos_labels.empty()) break;
    }
    std::sort(pos_labels.begin(), pos_labels.end(),
              [](const PosLabel& a, const PosLabel& b) { return a.span.start < b.span.start; });

    for (const auto* set : sets) {
      std::vector<BfnLabel> targets, fes, gfs, pts;
      for (const auto* layer : children(set, "layer")) {
        auto lname = attr(layer, "name").value_or("");
        if (lname == "Target") {
          auto ls = layer_labels(layer);
          targets.insert(targets.end(), ls.begin(), ls.end());
        } else if (!primary_rank(layer)) {
          continue;
        } else if (lname == "FE") {
          fes = layer_labels(layer);
        } else if (lname == "GF") {
          gfs = layer_labels(layer);
        } else if (lname == "PT") {
          pts = layer_labels(layer);
        }
      }
      targets.erase(std::remove_if(targets.begin(), targets.end(),
                                   [](const BfnLabel& l) { return !l.start || !l.end; }),
                    targets.end());
      if (targets.empty()) continue;
      ++result.records;

      std::string record_id = sid;
      if (auto set_id = attr(set, "ID")) record_id += "/" + std::string(*set_id);
      auto fail = [&](std::string msg) { result.issues.push_back({record_id, std::move(msg)}); };

      AnnotatedSentence as;
      as.sentence_id = sid;
      as.text = sentence_text;
      as.dialect = Dialect::BfnPhrase;
      as.pos_labels = pos_labels;

      bool ok = true;
      long tstart = *targets.front().start, tend = *targets.front().end;
      for (const auto& t : targets) {
        if (!in_text(t)) ok = false;
        tstart = std::min(tstart, *t.start);
        tend = std::max(tend, *t.end);
      }
      if (!ok) {
        fail("target offsets outside sentence text");
        continue;
      }
      as.target = {static_cast<std::size_t>(tstart), static_cast<std::size_t>(tend)};

      auto find_at = [](const std::vector<BfnLabel>& labels, long s, long e) -> std::optional<std::string> {
        for (const auto& l : labels) {
          if (l.start && l.end && *l.start == s && *l.end == e) return l.name;
        }
        return std::nullopt;
      };

      for (const auto& fe : fes) {
        FeSpan span;
        span.fe_name = fe.name;
        if (!fe.start || !fe.end || fe.itype) {
          span.null_instantiated = true;
        } else {
          if (!in_text(fe)) {
            fail("FE " + fe.name + " offsets [" + std::to_string(*fe.start) + "," +
                 std::to_string(*fe.end) + "] overlap no text");
            ok = false;
            break;
          }
          span.span = TokenSpan{static_cast<std::size_t>(*fe.start), static_cast<std::size_t>(*fe.end)};
          span.phrase_type = find_at(pts, *fe.start, *fe.end);
          span.gram_function = find_at(gfs, *fe.start, *fe.end);
          if (!span.phrase_type && !span.gram_function) span.null_instantiated = true;
        }
        as.fe_spans.push_back(std::move(span));
      }
      if (!ok) continue;

      auto frame = resolve_frame(set);
      if (!frame) {
        fail("no frame name on annotation set or enclosing element");
        continue;
      }
      as.frame = *frame;
      if (auto lu = resolve_lu(set)) {
        as.lu_ref = *lu;
      } else {
        as.lu_ref = text::to_lower(text::code_point_slice(sentence_text, cps, as.target.start, as.target.end)) + ".v";
      }
      result.sentences.push_back(std::move(as));
    }
  }
  return result;
}

namespace detail {

struct SwefnWalk {
  std::vector<WordAnno> words;
  std::vector<std::pair<std::size_t, std::size_t>> word_spans;  // code point spans
  std::vector<FeSpan> spans;
  std::vector<std::vector<std::size_t>> span_words;  // indexes into words
  std::vector<std::size_t> open;                     // indexes into spans
  std::vector<std::size_t> target_words;
  int lu_depth = 0;
  std::optional<std::string> lu_attr;
  bool saw_lu = false;
  std::size_t cursor = 0;  // code points emitted so far
};

inline void walk_swefn(const XmlNode* n, SwefnWalk& w) {
  for (auto* c = n->first_node(); c; c = c->next_sibling()) {
    if (c->type() != rx::node_element) continue;
    auto nm = name_of(c);
    if (nm == "w") {
      WordAnno word;
      word.surface = std::string(text::trim(text_content(c)));
      word.msd = attr(c, "msd") ? std::optional<std::string>(std::string(*attr(c, "msd"))) : std::nullopt;
      if (auto p = attr(c, "pos"); p && !p->empty()) {
        word.pos = std::string(*p);
      } else if (word.msd) {
        word.pos = word.msd->substr(0, word.msd->find('.'));
      }
      word.ref = static_cast<int>(attr_int(c, "ref").value_or(static_cast<long>(w.words.size() + 1)));
      if (auto h = attr_int(c, "dephead")) word.dephead = static_cast<int>(*h);
      word.deprel = std::string(attr(c, "deprel").value_or(""));
      if (w.cursor > 0) ++w.cursor;  // separating space
      const auto len = text::code_point_length(word.surface);
      const std::size_t start = w.cursor;
      w.cursor += len;
      w.word_spans.emplace_back(start, len == 0 ? start : w.cursor - 1);
      const auto index = w.words.size();
      w.words.push_back(std::move(word));
      for (auto s : w.open) w.span_words[s].push_back(index);
      if (w.lu_depth > 0) w.target_words.push_back(index);
    } else if (nm == "element") {
      auto fe = std::string(attr(c, "name").value_or(""));
      if (fe == "LU") {
        w.saw_lu = true;
        if (auto lu = attr(c, "lu")) w.lu_attr = std::string(*lu);
        ++w.lu_depth;
        walk_swefn(c, w);
        --w.lu_depth;
      } else {
        FeSpan span;
        span.fe_name = fe;
        w.open.push_back(w.spans.size());
        w.spans.push_back(std::move(span));
        w.span_words.emplace_back();
        walk_swefn(c, w);
        w.open.pop_back();
      }
    } else {
      walk_swefn(c, w);
    }
  }
}

}  // namespace detail

/// Parses a SweFN-layout document. One AnnotatedSentence per sentence element;
/// sentences without an LU element or without a resolvable frame go to `issues`.
inline IngestResult parse_swefn_corpus(std::string_view source) {
  using namespace detail;
  IngestResult result;
  XmlDocument doc(source);
  std::vector<const XmlNode*> sentences;
  collect_descendants(doc.root(), "sentence", sentences);

  std::size_t ordinal = 0;
  for (const auto* sent : sentences) {
    ++ordinal;
    ++result.records;
    std::string sid(attr(sent, "id").value_or(attr(sent, "ID").value_or("")));
    if (sid.empty()) sid = "s" + std::to_string(ordinal);

    SwefnWalk w;
    walk_swefn(sent, w);
    if (!w.saw_lu || w.target_words.empty()) {
      result.issues.push_back({sid, "sentence has no LU element"});
      continue;
    }
    auto frame = resolve_frame(sent);
    if (!frame) {
      result.issues.push_back({sid, "no frame name on sentence or enclosing element"});
      continue;
    }

    AnnotatedSentence as;
    as.sentence_id = sid;
    as.dialect = Dialect::SwefnDep;
    as.frame = *frame;
    std::vector<std::string> surfaces;
    for (const auto& word : w.words) surfaces.push_back(word.surface);
    as.text = text::join(surfaces, " ");
    as.words = w.words;
    as.target = {w.word_spans[w.target_words.front()].first, w.word_spans[w.target_words.back()].second};
    for (auto i : w.target_words) as.target_refs.push_back(w.words[i].ref);

    for (std::size_t s = 0; s < w.spans.size(); ++s) {
      FeSpan span = std::move(w.spans[s]);
      const auto& idx = w.span_words[s];
      if (idx.empty()) {
        span.null_instantiated = true;
      } else {
        span.span = TokenSpan{w.word_spans[idx.front()].first, w.word_spans[idx.back()].second};
        for (auto i : idx) span.words.push_back(w.words[i]);
      }
      as.fe_spans.push_back(std::move(span));
    }

    if (w.lu_attr) {
      as.lu_ref = *w.lu_attr;
    } else if (auto lu = resolve_lu(sent)) {
      as.lu_ref = *lu;
    } else {
      as.lu_ref = text::to_lower(w.words[w.target_words.front()].surface) + ".vb";
    }
    result.sentences.push_back(std::move(as));
  }
  return result;
}

inline IngestResult parse_corpus(std::string_view source, Dialect dialect) {
  return dialect == Dialect::BfnPhrase ? parse_bfn_corpus(source) : parse_swefn_corpus(source);
}

// ---------------------------------------------------------------------------
// JSON-lines serialization

using nlohmann::json;

inline void to_json(json& j, const TokenSpan& s) { j = json{{"start", s.start}, {"end", s.end}}; }
inline void from_json(const json& j, TokenSpan& s) {
  j.at("start").get_to(s.start);
  j.at("end").get_to(s.end);
}

inline void to_json(json& j, const WordAnno& w) {
  j = json{{"surface", w.surface}, {"pos", w.pos}, {"ref", w.ref}, {"deprel", w.deprel}};
  j["msd"] = w.msd ? json(*w.msd) : json(nullptr);
  j["dephead"] = w.dephead ? json(*w.dephead) : json(nullptr);
}
inline void from_json(const json& j, WordAnno& w) {
  j.at("surface").get_to(w.surface);
  j.at("pos").get_to(w.pos);
  j.at("ref").get_to(w.ref);
  j.at("deprel").get_to(w.deprel);
  w.msd = j.value("msd", json()).is_null() ? std::nullopt : std::optional(j.at("msd").get<std::string>());
  w.dephead = j.value("dephead", json()).is_null() ? std::nullopt : std::optional(j.at("dephead").get<int>());
}

inline void to_json(json& j, const PosLabel& p) { j = json{{"span", p.span}, {"tag", p.tag}}; }
inline void from_json(const json& j, PosLabel& p) {
  j.at("span").get_to(p.span);
  j.at("tag").get_to(p.tag);
}

namespace detail {
template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}
template <typename T>
std::optional<T> json_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}
}  // namespace detail

inline void to_json(json& j, const FeSpan& f) {
  j = json{{"fe_name", f.fe_name},
           {"span", detail::optional_json(f.span)},
           {"phrase_type", detail::optional_json(f.phrase_type)},
           {"gram_function", detail::optional_json(f.gram_function)},
           {"words", f.words},
           {"null_instantiated", f.null_instantiated}};
}
inline void from_json(const json& j, FeSpan& f) {
  j.at("fe_name").get_to(f.fe_name);
  f.span = detail::json_optional<TokenSpan>(j, "span");
  f.phrase_type = detail::json_optional<std::string>(j, "phrase_type");
  f.gram_function = detail::json_optional<std::string>(j, "gram_function");
  f.words = j.value("words", std::vector<WordAnno>{});
  f.null_instantiated = j.value("null_instantiated", false);
}

inline void to_json(json& j, const AnnotatedSentence& s) {
  j = json{{"sentence_id", s.sentence_id}, {"text", s.text},       {"frame", s.frame},
           {"target", s.target},           {"lu_ref", s.lu_ref},   {"fe_spans", s.fe_spans},
           {"dialect", to_string(s.dialect)}};
  if (s.dialect == Dialect::BfnPhrase) {
    j["pos_labels"] = s.pos_labels;
  } else {
    j["words"] = s.words;
    j["target_refs"] = s.target_refs;
  }
}
inline void from_json(const json& j, AnnotatedSentence& s) {
  j.at("sentence_id").get_to(s.sentence_id);
  j.at("text").get_to(s.text);
  j.at("frame").get_to(s.frame);
  j.at("target").get_to(s.target);
  j.at("lu_ref").get_to(s.lu_ref);
  j.at("fe_spans").get_to(s.fe_spans);
  auto d = parse_dialect(j.at("dialect").get<std::string>());
  if (!d) throw Error("unknown dialect " + j.at("dialect").dump());
  s.dialect = *d;
  s.pos_labels = j.value("pos_labels", std::vector<PosLabel>{});
  s.words = j.value("words", std::vector<WordAnno>{});
  s.target_refs = j.value("target_refs", std::vector<int>{});
}

inline void write_jsonl(std::ostream& out, const std::vector<AnnotatedSentence>& sentences) {
  for (const auto& s : sentences) out << json(s).dump() << '\n';
}

inline std::vector<AnnotatedSentence> read_jsonl(std::istream& in) {
  std::vector<AnnotatedSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line).get<AnnotatedSentence>());
    } catch (const json::exception& e) {
      throw Error("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fngram
