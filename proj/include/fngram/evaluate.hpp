#pragma once

// Coverage of corpus examples by a final shared pattern set.

#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fngram/compare.hpp"
#include "fngram/patterns.hpp"
#include "fngram/types.hpp"

namespace fngram {

struct CoverageReport {
  std::string framenet;
  MatchLevel level = MatchLevel::SemanticSyntactic;
  MatchMode mode = MatchMode::Fuzzy;
  std::size_t total = 0;
  std::size_t in_shared_frames = 0;  // examples whose frame is in the final frame set
  std::size_t covered = 0;

  std::size_t frame_level_covered() const { return in_shared_frames; }
  double pct_of_shared() const { return percent(covered, in_shared_frames); }
  double pct_of_all() const { return percent(covered, total); }
  double frame_level_pct() const { return percent(in_shared_frames, total); }
};

/// Key of an example with non-core FEs, repeats, word order and prepositions removed.
inline PatternKey reduce_example(const SentencePattern& p, MatchLevel level) {
  PatternKey k;
  k.frame = p.frame;
  if (level == MatchLevel::SemanticSyntactic) k.voice = p.voice;
  for (const auto& r : p.realizations) {
    if (r.coreness == Coreness::NonCore) continue;
    k.fes.push_back(level == MatchLevel::Semantic ? r.display_name() : r.category());
  }
  std::sort(k.fes.begin(), k.fes.end());
  k.fes.erase(std::unique(k.fes.begin(), k.fes.end()), k.fes.end());
  return k;
}

/// An example is covered when its frame is a final frame and some final pattern
/// subsumes its reduced key.
inline CoverageReport coverage(const SharedPatternSet& final_set, const std::vector<SentencePattern>& examples,
                               std::string framenet = {}) {
  CoverageReport r;
  r.framenet = std::move(framenet);
  r.level = final_set.level;
  r.mode = final_set.mode;
  const auto frames = final_set.final_frames();
  std::map<std::pair<std::string, std::optional<Voice>>, std::vector<const PatternKey*>> buckets;
  for (const auto* m : final_set.finals()) buckets[{m->key.frame, m->key.voice}].push_back(&m->key);
  for (const auto& e : examples) {
    ++r.total;
    if (!frames.count(e.frame)) continue;
    ++r.in_shared_frames;
    const auto key = reduce_example(e, final_set.level);
    auto it = buckets.find({key.frame, key.voice});
    if (it == buckets.end()) continue;
    for (const auto* k : it->second) {
      if (subsumes(*k, key)) {
        ++r.covered;
        break;
      }
    }
  }
  return r;
}

inline constexpr std::string_view kCoverageHeader =
    "framenet,level,mode,total,in_shared_frames,covered,pct_of_shared,pct_of_all,frame_level_covered,frame_level_pct";

inline void write_coverage_csv(std::ostream& out, const std::vector<CoverageReport>& rows) {
  out << kCoverageHeader << '\n';
  for (const auto& r : rows) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(1) << r.framenet << ',' << to_string(r.level) << ',' << to_string(r.mode)
         << ',' << r.total << ',' << r.in_shared_frames << ',' << r.covered << ',' << r.pct_of_shared() << ','
         << r.pct_of_all() << ',' << r.frame_level_covered() << ',' << r.frame_level_pct();
    out << line.str() << '\n';
  }
}

}  // namespace fngram
