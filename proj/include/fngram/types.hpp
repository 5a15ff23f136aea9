#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fngram {

inline constexpr std::string_view kToolName = "fngram";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document; `offset` is the byte position where parsing stopped.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Bad command-line or configuration value (mapped to exit status 2 by the CLI).
class UsageError : public Error {
public:
  using Error::Error;
};

enum class Dialect { BfnPhrase, SwefnDep };
enum class Voice { Act, Pass };
enum class SynFunction { None, Subj, Obj };
enum class Coreness { Core, NonCore };
enum class RglType { NP, Adv, VP };
enum class MatchLevel { Semantic, SemanticSyntactic };
enum class MatchMode { Exact, Fuzzy };

/// Inclusive [start, end] range of Unicode code point offsets into a sentence text.
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool contains(const TokenSpan& o) const { return start <= o.start && o.end <= end; }
  bool overlaps(const TokenSpan& o) const { return start <= o.end && o.start <= end; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

inline std::string_view to_string(Dialect d) {
  return d == Dialect::BfnPhrase ? "BfnPhrase" : "SwefnDep";
}

inline std::string_view to_string(Voice v) { return v == Voice::Act ? "Act" : "Pass"; }

inline std::string_view to_string(SynFunction f) {
  switch (f) {
    case SynFunction::Subj: return "Subj";
    case SynFunction::Obj: return "Obj";
    case SynFunction::None: break;
  }
  return "";
}

inline std::string_view to_string(RglType t) {
  switch (t) {
    case RglType::NP: return "NP";
    case RglType::Adv: return "Adv";
    case RglType::VP: return "VP";
  }
  return "";
}

inline std::string_view to_string(MatchLevel l) {
  return l == MatchLevel::Semantic ? "sem" : "semsyn";
}

inline std::string_view to_string(MatchMode m) { return m == MatchMode::Exact ? "exact" : "fuzzy"; }

inline std::optional<Dialect> parse_dialect(std::string_view s) {
  if (s == "bfn" || s == "BfnPhrase") return Dialect::BfnPhrase;
  if (s == "swefn" || s == "SwefnDep") return Dialect::SwefnDep;
  return std::nullopt;
}

inline std::optional<Voice> parse_voice(std::string_view s) {
  if (s == "Act") return Voice::Act;
  if (s == "Pass") return Voice::Pass;
  return std::nullopt;
}

inline std::optional<RglType> parse_rgl_type(std::string_view s) {
  if (s == "NP") return RglType::NP;
  if (s == "Adv") return RglType::Adv;
  if (s == "VP") return RglType::VP;
  return std::nullopt;
}

inline std::optional<MatchLevel> parse_match_level(std::string_view s) {
  if (s == "sem" || s == "semantic") return MatchLevel::Semantic;
  if (s == "semsyn" || s == "semantic-syntactic") return MatchLevel::SemanticSyntactic;
  return std::nullopt;
}

inline std::optional<MatchMode> parse_match_mode(std::string_view s) {
  if (s == "exact") return MatchMode::Exact;
  if (s == "fuzzy") return MatchMode::Fuzzy;
  return std::nullopt;
}

}  // namespace fngram
