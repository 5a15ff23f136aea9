#pragma once

// In-process access to the bundled fixture corpora.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fngram/aggregate.hpp"
#include "fngram/pipeline.hpp"

#ifndef FNGRAM_FIXTURES_DIR
#error "FNGRAM_FIXTURES_DIR must be defined"
#endif

namespace fixtures {

inline std::filesystem::path dir() { return FNGRAM_FIXTURES_DIR; }
inline std::filesystem::path path(const std::string& rel) { return dir() / rel; }

struct Side {
  std::string name;
  fngram::FrameIndex index;
  std::vector<fngram::AnnotatedSentence> sentences;
  std::map<std::string, std::vector<fngram::SentencePattern>> regimes;  // "0.0", "1.0", "2.0"

  const std::vector<fngram::SentencePattern>& patterns_for(const fngram::Settings& s) const {
    if (!s.skip_unconsidered) return regimes.at("0.0");
    if (!s.generalize_types) return regimes.at("1.0");
    return regimes.at("2.0");
  }
  fngram::SettingsResult settings(const std::string& id) const {
    const auto s = *fngram::parse_settings(id);
    return fngram::compute_settings(patterns_for(s), s);
  }
  std::vector<fngram::SentencePattern> kept(const std::string& id) const {
    const auto s = *fngram::parse_settings(id);
    return fngram::apply_settings(patterns_for(s), s).kept;
  }
};

inline Side load_side(const fngram::PipelineConfig& cfg, const fngram::SideConfig& sc) {
  Side side;
  side.name = sc.name;
  std::vector<std::filesystem::path> frame_files;
  for (const auto& f : sc.frames) frame_files.push_back(cfg.resolve(f));
  side.index = fngram::load_frame_indexes(frame_files);
  for (const auto& c : sc.corpora) {
    auto parsed = fngram::parse_corpus(fngram::read_file(cfg.resolve(c)), sc.dialect);
    for (auto& s : parsed.sentences) side.sentences.push_back(std::move(s));
  }
  for (const char* regime : {"0.0", "1.0", "2.0"}) {
    side.regimes[regime] =
        fngram::normalize_corpus(side.sentences, side.index, fngram::parse_settings(regime)->normalize_options())
            .patterns;
  }
  return side;
}

struct Bundle {
  fngram::PipelineConfig config;
  Side left, right;
};

inline Bundle load(const std::filesystem::path& config = path("pipeline.json")) {
  Bundle b;
  b.config = fngram::load_pipeline_config(config);
  b.left = load_side(b.config, b.config.left);
  b.right = load_side(b.config, b.config.right);
  return b;
}

}  // namespace fixtures
