#pragma once

// Registry of frames and their core / non-core frame element sets.
//
// TSV format, one row per (frame, kind):
//   frame<TAB>core<TAB>fe1,fe2,...
//   frame<TAB>noncore<TAB>fe1,fe2,...
// Blank lines and lines starting with '#' are ignored. Rows for the same frame merge.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "fngram/text.hpp"
#include "fngram/types.hpp"

namespace fngram {

struct FrameDef {
  std::string frame;
  std::set<std::string> core_fes;
  std::set<std::string> noncore_fes;

  friend bool operator==(const FrameDef&, const FrameDef&) = default;
};

/// Raised when a (frame, FE) pair is not covered by the index.
class CorenessError : public Error {
public:
  CorenessError(std::string frame, std::string fe)
      : Error("frame index has no entry for FE '" + fe + "' of frame '" + frame + "'"),
        frame_(std::move(frame)),
        fe_(std::move(fe)) {}
  const std::string& frame() const noexcept { return frame_; }
  const std::string& fe() const noexcept { return fe_; }

private:
  std::string frame_, fe_;
};

class FrameIndex {
public:
  const std::map<std::string, FrameDef>& defs() const { return defs_; }
  bool empty() const { return defs_.empty(); }
  std::size_t size() const { return defs_.size(); }
  bool contains(std::string_view frame) const { return defs_.find(std::string(frame)) != defs_.end(); }

  const FrameDef* find(std::string_view frame) const {
    auto it = defs_.find(std::string(frame));
    return it == defs_.end() ? nullptr : &it->second;
  }

  Coreness coreness(std::string_view frame, std::string_view fe) const {
    const auto* def = find(frame);
    if (def) {
      if (def->core_fes.count(std::string(fe))) return Coreness::Core;
      if (def->noncore_fes.count(std::string(fe))) return Coreness::NonCore;
    }
    throw CorenessError(std::string(frame), std::string(fe));
  }

  /// Adds FEs to a frame; an FE ending up in both sets is a load error.
  void add(const std::string& frame, Coreness kind, const std::set<std::string>& fes) {
    auto& def = defs_[frame];
    def.frame = frame;
    auto& into = kind == Coreness::Core ? def.core_fes : def.noncore_fes;
    const auto& other = kind == Coreness::Core ? def.noncore_fes : def.core_fes;
    for (const auto& fe : fes) {
      if (other.count(fe)) {
        throw Error("frame '" + frame + "': FE '" + fe + "' listed as both core and non-core");
      }
      into.insert(fe);
    }
  }

  /// Per-frame precedence merge: every frame defined in `later` replaces this index's entry.
  void merge_with_precedence(const FrameIndex& later) {
    for (const auto& [frame, def] : later.defs_) defs_[frame] = def;
  }

  friend bool operator==(const FrameIndex&, const FrameIndex&) = default;

private:
  std::map<std::string, FrameDef> defs_;
};

inline FrameIndex load_frame_index(std::string_view source) {
  FrameIndex index;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(source, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error("frame index line " + std::to_string(lineno) + ": expected frame<TAB>kind<TAB>FEs");
    }
    const auto frame = std::string(text::trim(fields[0]));
    const auto kind = text::trim(fields[1]);
    if (frame.empty()) throw Error("frame index line " + std::to_string(lineno) + ": empty frame name");
    Coreness c;
    if (kind == "core") {
      c = Coreness::Core;
    } else if (kind == "noncore") {
      c = Coreness::NonCore;
    } else {
      throw Error("frame index line " + std::to_string(lineno) + ": unknown kind '" + std::string(kind) + "'");
    }
    std::set<std::string> fes;
    if (fields.size() == 3) {
      for (auto& fe : text::split_nonempty(fields[2], ',')) fes.insert(std::move(fe));
    }
    index.add(frame, c, fes);
  }
  return index;
}

/// Canonical TSV: frames sorted, one core and one noncore row each, FEs sorted.
inline std::string emit_frame_index(const FrameIndex& index) {
  std::ostringstream out;
  for (const auto& [frame, def] : index.defs()) {
    out << frame << "\tcore\t" << text::join(def.core_fes, ",") << '\n';
    out << frame << "\tnoncore\t" << text::join(def.noncore_fes, ",") << '\n';
  }
  return out.str();
}

}  // namespace fngram
