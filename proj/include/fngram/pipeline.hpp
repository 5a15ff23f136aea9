#pragma once

// End-to-end run: ingest -> normalize -> aggregate -> compare -> generate -> evaluate,
// driven by a JSON configuration. Every intermediate artifact is written below the
// output directory, together with a manifest of inputs, configuration and digests.
//
// {
//   "left":  { "name": "BFN",   "dialect": "bfn",   "corpora": ["..."], "frames": ["..."] },
//   "right": { "name": "SweFN", "dialect": "swefn", "corpora": ["..."], "frames": ["..."] },
//   "voice_rules": "voice_rules.json",
//   "comparisons": ["2.B:2.B", "3.B:2.B"],
//   "levels": ["sem", "semsyn"], "modes": ["exact", "fuzzy"],
//   "grammar": { "level": "semsyn", "mode": "fuzzy", "prune": true, "include_noncore": false },
//   "threads": 0
// }
//
// Relative paths are resolved against the configuration file's directory. The first
// comparison feeds the grammar and the coverage evaluation.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fngram/aggregate.hpp"
#include "fngram/compare.hpp"
#include "fngram/corpus.hpp"
#include "fngram/digest.hpp"
#include "fngram/evaluate.hpp"
#include "fngram/frame_index.hpp"
#include "fngram/grammar.hpp"
#include "fngram/normalize.hpp"
#include "fngram/patterns.hpp"
#include "fngram/types.hpp"
#include "fngram/voice_rules.hpp"

namespace fngram {

namespace fs = std::filesystem;

/// Error raised inside a pipeline stage; carries the stage name and the record or file involved.
class StageError : public Error {
public:
  StageError(std::string stage, std::string context, const std::string& what)
      : Error(what), stage_(std::move(stage)), context_(std::move(context)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::string& context() const noexcept { return context_; }

private:
  std::string stage_, context_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, std::string_view content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out) throw Error("write failed for " + p.string());
}

/// Frame index from several TSV files; a frame defined in a later file replaces earlier definitions.
inline FrameIndex load_frame_indexes(const std::vector<fs::path>& files) {
  FrameIndex index;
  for (const auto& f : files) index.merge_with_precedence(load_frame_index(read_file(f)));
  return index;
}

struct SideConfig {
  std::string name;
  Dialect dialect = Dialect::BfnPhrase;
  std::vector<std::string> corpora;  // as written in the config
  std::vector<std::string> frames;
};

struct Comparison {
  Settings left;
  Settings right;
  std::string name() const { return left.name() + ":" + right.name(); }
};

struct PipelineConfig {
  fs::path base_dir;
  SideConfig left, right;
  std::optional<std::string> voice_rules;
  std::vector<Comparison> comparisons;
  std::vector<MatchLevel> levels{MatchLevel::Semantic, MatchLevel::SemanticSyntactic};
  std::vector<MatchMode> modes{MatchMode::Exact, MatchMode::Fuzzy};
  MatchLevel grammar_level = MatchLevel::SemanticSyntactic;
  MatchMode grammar_mode = MatchMode::Fuzzy;
  bool prune = true;
  bool include_noncore = false;
  unsigned threads = 0;

  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }
};

inline Settings parse_settings_or_throw(std::string_view name) {
  auto s = parse_settings(name);
  if (!s) throw UsageError("unknown settings id '" + std::string(name) + "' (expected 0.0, 1.0, 1.A, ... 3.B)");
  return *s;
}

inline Comparison parse_comparison(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const auto s = parse_settings_or_throw(text);
    return {s, s};
  }
  return {parse_settings_or_throw(text.substr(0, colon)), parse_settings_or_throw(text.substr(colon + 1))};
}

inline PipelineConfig parse_pipeline_config(const nlohmann::json& j, fs::path base_dir) {
  PipelineConfig c;
  c.base_dir = std::move(base_dir);
  try {
    auto side = [](const nlohmann::json& s, const char* which) {
      SideConfig out;
      if (!s.is_object()) throw UsageError(std::string("config: '") + which + "' must be an object");
      out.name = s.value("name", std::string(which));
      const auto dialect = s.value("dialect", std::string());
      auto d = parse_dialect(dialect);
      if (!d) throw UsageError("config: unknown dialect '" + dialect + "' for " + which);
      out.dialect = *d;
      out.corpora = s.value("corpora", std::vector<std::string>{});
      out.frames = s.value("frames", std::vector<std::string>{});
      if (out.corpora.empty()) throw UsageError(std::string("config: no corpora for ") + which);
      if (out.frames.empty()) throw UsageError(std::string("config: no frame index for ") + which);
      if (out.name.empty() || out.name.find_first_of("/\\ \t") != std::string::npos) {
        throw UsageError("config: side name '" + out.name + "' must be a plain identifier");
      }
      return out;
    };
    if (!j.contains("left") || !j.contains("right")) throw UsageError("config: needs 'left' and 'right'");
    c.left = side(j.at("left"), "left");
    c.right = side(j.at("right"), "right");
    if (c.left.name == c.right.name) throw UsageError("config: left and right need distinct names");
    if (j.contains("voice_rules")) c.voice_rules = j.at("voice_rules").get<std::string>();
    for (const auto& s : j.value("comparisons", std::vector<std::string>{"2.B:2.B"})) {
      c.comparisons.push_back(parse_comparison(s));
    }
    if (c.comparisons.empty()) throw UsageError("config: 'comparisons' is empty");
    if (j.contains("levels")) {
      c.levels.clear();
      for (const auto& l : j.at("levels").get<std::vector<std::string>>()) {
        auto level = parse_match_level(l);
        if (!level) throw UsageError("config: unknown level '" + l + "'");
        c.levels.push_back(*level);
      }
    }
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j.at("modes").get<std::vector<std::string>>()) {
        auto mode = parse_match_mode(m);
        if (!mode) throw UsageError("config: unknown mode '" + m + "'");
        c.modes.push_back(*mode);
      }
    }
    if (j.contains("grammar")) {
      const auto& g = j.at("grammar");
      const auto level = g.value("level", std::string("semsyn"));
      const auto mode = g.value("mode", std::string("fuzzy"));
      auto l = parse_match_level(level);
      auto m = parse_match_mode(mode);
      if (!l || !m) throw UsageError("config: bad grammar level/mode '" + level + "'/'" + mode + "'");
      c.grammar_level = *l;
      c.grammar_mode = *m;
      c.prune = g.value("prune", true);
      c.include_noncore = g.value("include_noncore", false);
    }
    c.threads = j.value("threads", 0u);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (c.grammar_level != MatchLevel::SemanticSyntactic) {
    throw UsageError("config: grammar level must be semsyn");
  }
  return c;
}

inline PipelineConfig load_pipeline_config(const fs::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + file.string() + ": " + e.what());
  }
  return parse_pipeline_config(j, file.has_parent_path() ? file.parent_path() : fs::path("."));
}

/// Configuration as recorded in the manifest (paths as written, no output directory).
inline nlohmann::json config_to_json(const PipelineConfig& c) {
  auto side = [](const SideConfig& s) {
    std::string dialect = s.dialect == Dialect::BfnPhrase ? "bfn" : "swefn";
    return nlohmann::json{{"name", s.name}, {"dialect", dialect}, {"corpora", s.corpora}, {"frames", s.frames}};
  };
  std::vector<std::string> comparisons, levels, modes;
  for (const auto& cmp : c.comparisons) comparisons.push_back(cmp.name());
  for (auto l : c.levels) levels.emplace_back(to_string(l));
  for (auto m : c.modes) modes.emplace_back(to_string(m));
  nlohmann::json j{{"left", side(c.left)},
                   {"right", side(c.right)},
                   {"comparisons", comparisons},
                   {"levels", levels},
                   {"modes", modes},
                   {"grammar",
                    {{"level", std::string(to_string(c.grammar_level))},
                     {"mode", std::string(to_string(c.grammar_mode))},
                     {"prune", c.prune},
                     {"include_noncore", c.include_noncore}}}};
  if (c.voice_rules) j["voice_rules"] = *c.voice_rules;
  return j;
}

struct RunResult {
  std::map<std::string, std::string> outputs;  // relative path -> sha256
  std::vector<std::string> warnings;
};

using Logger = std::function<void(std::string_view stage, const std::string& message)>;

namespace detail {

template <typename F>
auto in_stage(const char* stage, const std::string& context, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, context, e.what());
  }
}

struct SideState {
  const SideConfig* config = nullptr;
  FrameIndex index;
  std::vector<AnnotatedSentence> sentences;
  std::map<std::string, NormalizeBatch> regimes;         // "0.0", "1.0", "2.0"
  std::map<std::string, SettingsResult> settings;        // settings id -> result
  std::map<std::string, std::vector<SentencePattern>> kept;  // settings id -> filtered patterns
};

inline std::string regime_of(const Settings& s) {
  if (!s.skip_unconsidered) return "0.0";
  if (!s.generalize_types) return "1.0";
  return "2.0";
}

inline std::string safe_file_name(std::string name) {
  for (auto& ch : name) {
    if (ch == '/' || ch == '\\' || ch == ':' || ch == ' ') ch = '_';
  }
  return name;
}

}  // namespace detail

/// Runs every stage and writes all artifacts below `out_dir`.
inline RunResult run_pipeline(const PipelineConfig& cfg, const fs::path& out_dir, const Logger& log = {}) {
  RunResult result;
  auto note = [&](std::string_view stage, const std::string& msg) {
    if (log) log(stage, msg);
  };
  auto emit = [&](const std::string& rel, const std::string& content) {
    write_file(out_dir / rel, content);
    result.outputs[rel] = sha256_hex(content);
  };

  nlohmann::json inputs = nlohmann::json::array();
  std::set<std::string> recorded;
  auto record_input = [&](const std::string& as_written) {
    if (!recorded.insert(as_written).second) return;
    inputs.push_back({{"path", as_written}, {"sha256", sha256_file(cfg.resolve(as_written))}});
  };

  VoiceRules rules;
  if (cfg.voice_rules) {
    detail::in_stage("normalize", *cfg.voice_rules, [&] {
      rules = load_voice_rules(read_file(cfg.resolve(*cfg.voice_rules)));
      record_input(*cfg.voice_rules);
    });
  }

  std::set<std::string> needed_settings;
  for (const auto& c : cfg.comparisons) {
    needed_settings.insert(c.left.name());
    needed_settings.insert(c.right.name());
  }

  detail::SideState sides[2];
  sides[0].config = &cfg.left;
  sides[1].config = &cfg.right;

  for (auto& side : sides) {
    const auto& sc = *side.config;
    const std::string dir = sc.name + "/";

    // frames
    std::vector<fs::path> frame_files;
    for (const auto& f : sc.frames) {
      frame_files.push_back(cfg.resolve(f));
      detail::in_stage("frames", f, [&] { record_input(f); });
    }
    side.index = detail::in_stage("frames", text::join(sc.frames, ","), [&] { return load_frame_indexes(frame_files); });
    emit(dir + "frames.tsv", emit_frame_index(side.index));

    // ingest
    std::ostringstream issues;
    for (const auto& corpus : sc.corpora) {
      auto parsed = detail::in_stage("ingest", corpus, [&] {
        record_input(corpus);
        return parse_corpus(read_file(cfg.resolve(corpus)), sc.dialect);
      });
      for (const auto& i : parsed.issues) issues << corpus << '\t' << i.sentence_id << '\t' << i.message << '\n';
      for (auto& s : parsed.sentences) side.sentences.push_back(std::move(s));
    }
    {
      std::ostringstream jsonl;
      write_jsonl(jsonl, side.sentences);
      emit(dir + "corpus.jsonl", jsonl.str());
      emit(dir + "issues.tsv", issues.str());
    }
    note("ingest", sc.name + ": " + std::to_string(side.sentences.size()) + " sentences");

    // normalize under each type regime
    for (const char* regime : {"0.0", "1.0", "2.0"}) {
      const auto opts = parse_settings(regime)->normalize_options(rules);
      auto batch = detail::in_stage("normalize", sc.name + " " + regime,
                                    [&] { return normalize_corpus(side.sentences, side.index, opts, cfg.threads); });
      std::ostringstream pat, skips;
      write_patterns(pat, batch.patterns);
      write_skips(skips, batch.skipped);
      emit(dir + "patterns." + regime + ".tsv", pat.str());
      emit(dir + "skips." + regime + ".tsv", skips.str());
      if (std::string(regime) == "2.0") {
        std::ostringstream w;
        for (const auto& line : batch.warnings) w << line << '\n';
        emit(dir + "warnings.txt", w.str());
        result.warnings.insert(result.warnings.end(), batch.warnings.begin(), batch.warnings.end());
      }
      note("normalize", sc.name + " " + regime + ": " + std::to_string(batch.patterns.size()) + " patterns, " +
                            std::to_string(batch.skipped.size()) + " skipped");
      side.regimes[regime] = std::move(batch);
    }

    // aggregate all ten settings
    std::vector<SettingsResult> all;
    for (auto id : kAllSettings) {
      const auto s = Settings::of(id);
      const auto& patterns = side.regimes.at(detail::regime_of(s)).patterns;
      auto r = detail::in_stage("aggregate", sc.name + " " + s.name(), [&] { return compute_settings(patterns, s); });
      std::ostringstream val, dropped;
      write_valences(val, r.valences);
      for (const auto& d : r.dropped) dropped << d.sentence_id << '\t' << d.frame << '\t' << to_string(d.reason) << '\n';
      emit(dir + "valences/" + s.name() + ".tsv", val.str());
      emit(dir + "valences/" + s.name() + ".dropped.tsv", dropped.str());
      if (needed_settings.count(s.name())) {
        std::set<std::string> frames;
        for (const auto& v : r.valences) frames.insert(v.frame);
        for (const auto& frame : frames) {
          emit(dir + "summaries/" + s.name() + "/" + detail::safe_file_name(frame) + ".txt",
               render_frame_summary(frame, r.valences));
        }
        side.kept[s.name()] = apply_settings(patterns, s).kept;
      }
      all.push_back(r);
      side.settings.emplace(s.name(), std::move(r));
    }
    std::ostringstream stats;
    write_stats_csv(stats, stats_table(all));
    emit(dir + "stats.csv", stats.str());
  }

  // compare
  const auto& L = sides[0];
  const auto& R = sides[1];
  std::vector<std::pair<std::string, FrameSetReport>> frame_rows;
  std::vector<PatternSetReport> pattern_rows;
  std::optional<SharedPatternSet> grammar_set;
  std::map<std::pair<MatchLevel, MatchMode>, SharedPatternSet> eval_sets;
  for (std::size_t ci = 0; ci < cfg.comparisons.size(); ++ci) {
    const auto& cmp = cfg.comparisons[ci];
    const auto& lv = L.settings.at(cmp.left.name()).valences;
    const auto& rv = R.settings.at(cmp.right.name()).valences;
    frame_rows.emplace_back(cmp.name(), frame_set_report(lv, rv));
    for (auto level : cfg.levels) {
      for (auto mode : cfg.modes) {
        auto shared = detail::in_stage("compare", cmp.name(), [&] {
          return intersect(lv, rv, level, mode, IntersectOptions{cfg.prune});
        });
        pattern_rows.push_back(pattern_set_report(cmp.name(), shared));
        std::ostringstream tsv;
        write_shared(tsv, shared);
        emit("compare/shared." + cmp.name() + "." + std::string(to_string(level)) + "." +
                 std::string(to_string(mode)) + ".tsv",
             tsv.str());
        if (ci == 0) eval_sets[{level, mode}] = shared;
      }
    }
    if (ci == 0) {
      grammar_set = detail::in_stage("compare", cmp.name(), [&] {
        return intersect(lv, rv, cfg.grammar_level, cfg.grammar_mode, IntersectOptions{cfg.prune});
      });
    }
  }
  {
    std::ostringstream frames, patterns;
    write_frame_report_csv(frames, frame_rows);
    write_pattern_report_csv(patterns, pattern_rows);
    emit("compare/frames.csv", frames.str());
    emit("compare/patterns.csv", patterns.str());
  }

  // generate
  const auto& first = cfg.comparisons.front();
  {
    GrammarHeader header;
    header.settings = first.name() + " " + std::string(to_string(cfg.grammar_level)) + " " +
                      std::string(to_string(cfg.grammar_mode));
    for (const auto& in : inputs) header.inputs.push_back({in.at("path").get<std::string>(), in.at("sha256").get<std::string>()});
    auto grammar = detail::in_stage("generate", first.name(), [&] {
      return build_grammar(*grammar_set,
                           {{cfg.left.name, L.kept.at(first.left.name())}, {cfg.right.name, R.kept.at(first.right.name())}},
                           header, GrammarOptions{cfg.include_noncore});
    });
    for (const auto& [name, content] : emit_abstract_syntax(grammar)) emit("grammar/" + name, content);
    note("generate", std::to_string(grammar.functions.size()) + " frame functions, " +
                         std::to_string(grammar.categories.size()) + " FE categories");
  }

  // evaluate
  {
    std::vector<CoverageReport> rows;
    for (const auto* side : {&L, &R}) {
      const auto& examples = side->regimes.at("2.0").patterns;
      for (const auto& [lm, shared] : eval_sets) {
        rows.push_back(coverage(shared, examples, side->config->name));
      }
    }
    std::ostringstream csv;
    write_coverage_csv(csv, rows);
    emit("evaluate/coverage.csv", csv.str());
  }

  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [path, digest] : result.outputs) outputs.push_back({{"path", path}, {"sha256", digest}});
  nlohmann::json manifest{{"tool", std::string(kToolName)},
                          {"version", std::string(kToolVersion)},
                          {"config", config_to_json(cfg)},
                          {"inputs", inputs},
                          {"outputs", outputs}};
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace fngram
