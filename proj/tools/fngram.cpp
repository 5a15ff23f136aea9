// fngram: command-line front end for the valence pattern pipeline.
//
// Exit status: 0 on success, 2 on usage errors, 1 on any other failure. Failures
// print a one-line JSON record {"stage", "error", "context"} on stderr.
// FNGRAM_LOG_LEVEL selects the log level (trace, debug, info, warn, error, off).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fngram/aggregate.hpp"
#include "fngram/compare.hpp"
#include "fngram/corpus.hpp"
#include "fngram/digest.hpp"
#include "fngram/evaluate.hpp"
#include "fngram/frame_index.hpp"
#include "fngram/grammar.hpp"
#include "fngram/normalize.hpp"
#include "fngram/patterns.hpp"
#include "fngram/pipeline.hpp"
#include "fngram/voice_rules.hpp"

namespace {

using namespace fngram;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("fngram");
  logger->set_pattern("[%l] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("FNGRAM_LOG_LEVEL")) {
    level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") level = spdlog::level::warn;
  }
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

int fail(const std::string& stage, const std::string& error, const std::string& context) {
  nlohmann::json rec{{"stage", stage}, {"error", error}, {"context", context}};
  std::cerr << rec.dump() << std::endl;
  return 1;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  write_file(path, content);
}

std::vector<SentencePattern> read_patterns_file(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_patterns(in);
}

MatchLevel level_or_throw(const std::string& s) {
  auto l = parse_match_level(s);
  if (!l) throw UsageError("unknown level '" + s + "' (sem or semsyn)");
  return *l;
}

MatchMode mode_or_throw(const std::string& s) {
  auto m = parse_match_mode(s);
  if (!m) throw UsageError("unknown mode '" + s + "' (exact or fuzzy)");
  return *m;
}

Dialect dialect_or_throw(const std::string& s) {
  auto d = parse_dialect(s);
  if (!d) throw UsageError("unknown dialect '" + s + "' (bfn or swefn)");
  return *d;
}

FrameIndex frames_from(const std::vector<std::string>& files) {
  std::vector<fs::path> paths(files.begin(), files.end());
  return load_frame_indexes(paths);
}

struct Options {
  // ingest
  std::string dialect;
  std::vector<std::string> inputs;
  std::string out;
  std::string issues;
  // frames
  std::vector<std::string> frame_files;
  bool validate = false;
  bool emit = false;
  // normalize / aggregate
  std::string settings = "2.B";
  std::string in;
  std::string skips;
  std::string voice_rules;
  std::string summary_dir;
  std::string stats;
  unsigned threads = 0;
  // compare
  std::string left, right, level = "semsyn", mode = "fuzzy", report, frames_report, label;
  bool no_prune = false;
  // generate
  std::string shared, lu_left, lu_right, left_name = "BFN", right_name = "SweFN", out_dir;
  bool include_noncore = false;
  // evaluate
  std::string final_set, examples, name, expect_level, expect_mode;
  // run
  std::string config;
};

int cmd_ingest(const Options& o) {
  const auto dialect = dialect_or_throw(o.dialect);
  std::vector<AnnotatedSentence> all;
  std::ostringstream issues;
  for (const auto& f : o.inputs) {
    try {
      auto r = parse_corpus(read_file(f), dialect);
      for (const auto& i : r.issues) {
        spdlog::warn("{}: {}: {}", f, i.sentence_id, i.message);
        issues << f << '\t' << i.sentence_id << '\t' << i.message << '\n';
      }
      spdlog::info("{}: {} sentences", f, r.sentences.size());
      for (auto& s : r.sentences) all.push_back(std::move(s));
    } catch (const Error& e) {
      return fail("ingest", e.what(), f);
    }
  }
  std::ostringstream out;
  write_jsonl(out, all);
  write_output(o.out, out.str());
  if (!o.issues.empty()) write_file(o.issues, issues.str());
  return 0;
}

int cmd_frames(const Options& o) {
  if (o.validate == o.emit) throw UsageError("frames: give exactly one of --validate or --emit");
  FrameIndex index;
  try {
    index = frames_from(o.frame_files);
  } catch (const Error& e) {
    return fail("frames", e.what(), text::join(o.frame_files, ","));
  }
  if (o.validate) {
    std::cout << index.size() << " frames OK\n";
  } else {
    write_output(o.out, emit_frame_index(index));
  }
  return 0;
}

int cmd_normalize(const Options& o) {
  const auto s = parse_settings_or_throw(o.settings);
  VoiceRules rules;
  if (!o.voice_rules.empty()) rules = load_voice_rules(read_file(o.voice_rules));
  FrameIndex index;
  try {
    index = frames_from(o.frame_files);
  } catch (const Error& e) {
    return fail("frames", e.what(), text::join(o.frame_files, ","));
  }
  std::vector<AnnotatedSentence> sentences;
  try {
    std::istringstream in(read_file(o.in));
    sentences = read_jsonl(in);
  } catch (const Error& e) {
    return fail("normalize", e.what(), o.in);
  }
  NormalizeBatch batch;
  try {
    batch = normalize_corpus(sentences, index, s.normalize_options(rules), o.threads);
  } catch (const CorenessError& e) {
    return fail("normalize", e.what(), e.frame() + "/" + e.fe());
  }
  for (const auto& w : batch.warnings) spdlog::warn("{}", w);
  spdlog::info("{} patterns, {} skipped", batch.patterns.size(), batch.skipped.size());
  std::ostringstream out;
  write_patterns(out, batch.patterns);
  write_output(o.out, out.str());
  if (!o.skips.empty()) {
    std::ostringstream sk;
    write_skips(sk, batch.skipped);
    write_file(o.skips, sk.str());
  }
  return 0;
}

int cmd_aggregate(const Options& o) {
  const auto s = parse_settings_or_throw(o.settings);
  SettingsResult r;
  try {
    r = compute_settings(read_patterns_file(o.in), s);
  } catch (const Error& e) {
    return fail("aggregate", e.what(), o.in);
  }
  for (const auto& d : r.dropped) spdlog::debug("dropped {} ({}): {}", d.sentence_id, d.frame, to_string(d.reason));
  std::ostringstream out;
  write_valences(out, r.valences);
  write_output(o.out, out.str());
  if (!o.summary_dir.empty()) {
    std::set<std::string> frames;
    for (const auto& v : r.valences) frames.insert(v.frame);
    for (const auto& f : frames) {
      write_file(fs::path(o.summary_dir) / (f + ".txt"), render_frame_summary(f, r.valences));
    }
  }
  if (!o.stats.empty()) {
    std::ostringstream st;
    write_stats_csv(st, {stats_row(s.name(), r.valences)});
    write_file(o.stats, st.str());
  }
  return 0;
}

std::vector<ValencePattern> read_valences_file(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_valences(in);
}

int cmd_compare(const Options& o) {
  const auto level = level_or_throw(o.level);
  const auto mode = mode_or_throw(o.mode);
  std::vector<ValencePattern> lv, rv;
  try {
    lv = read_valences_file(o.left);
    rv = read_valences_file(o.right);
  } catch (const Error& e) {
    return fail("compare", e.what(), o.left + "," + o.right);
  }
  auto shared = intersect(lv, rv, level, mode, IntersectOptions{!o.no_prune});
  std::ostringstream tsv;
  write_shared(tsv, shared);
  write_output(o.out, tsv.str());
  if (!o.report.empty()) {
    std::ostringstream csv;
    write_pattern_report_csv(csv, {pattern_set_report(o.label, shared)});
    write_file(o.report, csv.str());
  }
  if (!o.frames_report.empty()) {
    std::ostringstream csv;
    write_frame_report_csv(csv, {{o.label, frame_set_report(lv, rv)}});
    write_file(o.frames_report, csv.str());
  }
  spdlog::info("{} admitted, {} final", shared.members.size(), shared.finals().size());
  return 0;
}

int cmd_generate(const Options& o) {
  const auto s = parse_settings_or_throw(o.settings);
  GrammarHeader header;
  header.settings = o.label.empty() ? s.name() : o.label;
  SharedPatternSet shared;
  std::vector<std::pair<std::string, std::vector<SentencePattern>>> evidence;
  try {
    const auto text = read_file(o.shared);
    header.inputs.push_back({o.shared, sha256_hex(text)});
    std::istringstream in(text);
    shared = read_shared(in);
    for (auto [name, path] : {std::pair{o.left_name, o.lu_left}, std::pair{o.right_name, o.lu_right}}) {
      if (path.empty()) continue;
      const auto pat = read_file(path);
      header.inputs.push_back({path, sha256_hex(pat)});
      std::istringstream pin(pat);
      evidence.emplace_back(name, apply_settings(read_patterns(pin), s).kept);
    }
  } catch (const Error& e) {
    return fail("generate", e.what(), o.shared);
  }
  AbstractGrammar g;
  try {
    g = build_grammar(shared, evidence, header, GrammarOptions{o.include_noncore});
  } catch (const Error& e) {
    return fail("generate", e.what(), o.shared);
  }
  for (const auto& [file, content] : emit_abstract_syntax(g)) write_file(fs::path(o.out_dir) / file, content);
  spdlog::info("{} FE categories, {} frame functions", g.categories.size(), g.functions.size());
  return 0;
}

int cmd_evaluate(const Options& o) {
  SharedPatternSet shared;
  std::vector<SentencePattern> examples;
  try {
    std::istringstream in(read_file(o.final_set));
    shared = read_shared(in);
    examples = read_patterns_file(o.examples);
  } catch (const Error& e) {
    return fail("evaluate", e.what(), o.final_set + "," + o.examples);
  }
  if (!o.expect_level.empty() && level_or_throw(o.expect_level) != shared.level) {
    throw UsageError("evaluate: --level " + o.expect_level + " does not match the shared set (" +
                     std::string(to_string(shared.level)) + ")");
  }
  if (!o.expect_mode.empty() && mode_or_throw(o.expect_mode) != shared.mode) {
    throw UsageError("evaluate: --mode " + o.expect_mode + " does not match the shared set (" +
                     std::string(to_string(shared.mode)) + ")");
  }
  std::ostringstream csv;
  write_coverage_csv(csv, {coverage(shared, examples, o.name)});
  write_output(o.out, csv.str());
  return 0;
}

int cmd_run(const Options& o) {
  const auto cfg = load_pipeline_config(o.config);
  try {
    auto r = run_pipeline(cfg, o.out_dir, [](std::string_view stage, const std::string& msg) {
      spdlog::info("{}: {}", stage, msg);
    });
    for (const auto& w : r.warnings) spdlog::debug("{}", w);
    spdlog::info("{} artifacts written to {}", r.outputs.size() + 1, o.out_dir);
  } catch (const StageError& e) {
    return fail(e.stage(), e.what(), e.context());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Frame valence pattern extraction and abstract syntax generation"};
  app.set_version_flag("--version", std::string(kToolName) + " " + std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;
  int (*handler)(const Options&) = nullptr;

  auto* ingest = app.add_subcommand("ingest", "Parse corpus XML into JSON lines");
  ingest->add_option("--dialect", o.dialect, "bfn or swefn")->required();
  ingest->add_option("--in", o.inputs, "Corpus XML files")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", o.out, "Output JSON lines (default stdout)");
  ingest->add_option("--issues", o.issues, "Write ingest issues here");
  ingest->callback([&] { handler = cmd_ingest; });

  auto* frames = app.add_subcommand("frames", "Validate or emit a frame index");
  frames->add_option("--index", o.frame_files, "Frame index TSV files, later ones take precedence")
      ->required()
      ->check(CLI::ExistingFile);
  frames->add_flag("--validate", o.validate, "Check the index and report the frame count");
  frames->add_flag("--emit", o.emit, "Print the merged index in canonical form");
  frames->add_option("--out", o.out, "Output file for --emit (default stdout)");
  frames->callback([&] { handler = cmd_frames; });

  auto* normalize = app.add_subcommand("normalize", "Extract sentence patterns");
  normalize->add_option("--in", o.in, "Corpus JSON lines")->required()->check(CLI::ExistingFile);
  normalize->add_option("--frames", o.frame_files, "Frame index TSV files")->required()->check(CLI::ExistingFile);
  normalize->add_option("--settings", o.settings, "Settings id selecting the type regime")->capture_default_str();
  normalize->add_option("--voice-rules", o.voice_rules, "Voice rule overrides (JSON)")->check(CLI::ExistingFile);
  normalize->add_option("--out", o.out, "Output patterns TSV (default stdout)");
  normalize->add_option("--skips", o.skips, "Write skipped sentences here");
  normalize->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  normalize->callback([&] { handler = cmd_normalize; });

  auto* aggregate = app.add_subcommand("aggregate", "Group sentence patterns into valence patterns");
  aggregate->add_option("--settings", o.settings, "Settings id (0.0 ... 3.B)")->capture_default_str();
  aggregate->add_option("--in", o.in, "Sentence patterns TSV")->required()->check(CLI::ExistingFile);
  aggregate->add_option("--out", o.out, "Output valences TSV (default stdout)");
  aggregate->add_option("--summary-dir", o.summary_dir, "Write per-frame summaries here");
  aggregate->add_option("--stats", o.stats, "Write the statistics row here");
  aggregate->callback([&] { handler = cmd_aggregate; });

  auto* compare = app.add_subcommand("compare", "Intersect two valence sets");
  compare->add_option("--left", o.left, "Left valences TSV")->required()->check(CLI::ExistingFile);
  compare->add_option("--right", o.right, "Right valences TSV")->required()->check(CLI::ExistingFile);
  compare->add_option("--level", o.level, "sem or semsyn")->capture_default_str();
  compare->add_option("--mode", o.mode, "exact or fuzzy")->capture_default_str();
  compare->add_flag("--no-prune", o.no_prune, "Keep members subsumed by other members as final");
  compare->add_option("--out", o.out, "Shared set TSV (default stdout)");
  compare->add_option("--report", o.report, "Pattern comparison CSV");
  compare->add_option("--frames-report", o.frames_report, "Frame comparison CSV");
  compare->add_option("--label", o.label, "Settings label for the report rows, e.g. 2.B:2.B");
  compare->callback([&] { handler = cmd_compare; });

  auto* generate = app.add_subcommand("generate", "Emit the abstract syntax");
  generate->add_option("--shared", o.shared, "Shared set TSV (semsyn)")->required()->check(CLI::ExistingFile);
  generate->add_option("--lu-left", o.lu_left, "Left sentence patterns TSV")->check(CLI::ExistingFile);
  generate->add_option("--lu-right", o.lu_right, "Right sentence patterns TSV")->check(CLI::ExistingFile);
  generate->add_option("--left-name", o.left_name, "Left framenet name")->capture_default_str();
  generate->add_option("--right-name", o.right_name, "Right framenet name")->capture_default_str();
  generate->add_option("--settings", o.settings, "Settings applied to the LU evidence")->capture_default_str();
  generate->add_option("--label", o.label, "Settings label for the header comment");
  generate->add_flag("--include-noncore", o.include_noncore, "Keep Opt_ categories and arguments");
  generate->add_option("--out-dir", o.out_dir, "Output directory")->required();
  generate->callback([&] { handler = cmd_generate; });

  auto* evaluate = app.add_subcommand("evaluate", "Coverage of examples by a final shared set");
  evaluate->add_option("--final", o.final_set, "Shared set TSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--examples", o.examples, "Sentence patterns TSV (2.0)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--level", o.expect_level, "Expected level of the shared set");
  evaluate->add_option("--mode", o.expect_mode, "Expected mode of the shared set");
  evaluate->add_option("--name", o.name, "Framenet name for the report row");
  evaluate->add_option("--out", o.out, "Coverage CSV (default stdout)");
  evaluate->callback([&] { handler = cmd_evaluate; });

  auto* run = app.add_subcommand("run", "Run the whole pipeline from a JSON config");
  run->add_option("--config", o.config, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", o.out_dir, "Output directory")->required();
  run->callback([&] { handler = cmd_run; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return handler(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const StageError& e) {
    return fail(e.stage(), e.what(), e.context());
  } catch (const std::exception& e) {
    return fail(app.get_subcommands().empty() ? "cli" : app.get_subcommands().front()->get_name(), e.what(), "");
  }
}
