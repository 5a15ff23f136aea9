#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <random>

#include "fngram/pipeline.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace fngram;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("fngram_pipeline_" + name + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return out;
}

nlohmann::json minimal() {
  return nlohmann::json::parse(R"({
    "left":  {"name": "BFN", "dialect": "bfn", "corpora": ["a.xml"], "frames": ["f.tsv"]},
    "right": {"name": "SweFN", "dialect": "swefn", "corpora": ["/abs/b.xml"], "frames": ["f.tsv"]}
  })");
}

}  // namespace

TEST(Config, DefaultsAndPathResolution) {
  const auto c = parse_pipeline_config(minimal(), "/work/cfg");
  ASSERT_EQ(c.comparisons.size(), 1u);
  EXPECT_EQ(c.comparisons[0].name(), "2.B:2.B");
  EXPECT_EQ(c.levels.size(), 2u);
  EXPECT_EQ(c.modes.size(), 2u);
  EXPECT_TRUE(c.prune);
  EXPECT_EQ(c.resolve(c.left.corpora[0]), fs::path("/work/cfg/a.xml"));
  EXPECT_EQ(c.resolve(c.right.corpora[0]), fs::path("/abs/b.xml"));
  EXPECT_EQ(c.right.dialect, Dialect::SwefnDep);
  EXPECT_EQ(parse_comparison("3.B:2.A").name(), "3.B:2.A");
  EXPECT_EQ(parse_comparison("1.A").name(), "1.A:1.A");
}

TEST(Config, UsageErrors) {
  auto bad = [](auto edit) {
    auto j = minimal();
    edit(j);
    return j;
  };
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["comparisons"] = {"9.Z:2.B"}; }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["comparisons"] = nlohmann::json::array(); }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["left"]["dialect"] = "xyz"; }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["right"]["name"] = "BFN"; }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["left"]["corpora"] = nlohmann::json::array(); }), "."),
               UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["grammar"] = {{"level", "sem"}}; }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["levels"] = {"deep"}; }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j["threads"] = "many"; }), "."), UsageError);
  EXPECT_THROW(parse_pipeline_config(bad([](auto& j) { j.erase("right"); }), "."), UsageError);
}

TEST(Run, WritesEveryStageAndIsDeterministic) {
  const auto cfg = load_pipeline_config(fixtures::path("pipeline.json"));
  const auto a = scratch("a");
  const auto b = scratch("b");
  const auto ra = run_pipeline(cfg, a);
  run_pipeline(cfg, b);
  const auto ta = tree(a);
  EXPECT_EQ(ta, tree(b));
  for (const char* rel : {"BFN/frames.tsv", "BFN/corpus.jsonl", "BFN/patterns.2.0.tsv", "BFN/skips.0.0.tsv",
                          "BFN/valences/3.B.tsv", "BFN/summaries/2.B/Desiring.txt", "BFN/stats.csv",
                          "SweFN/valences/2.B.tsv", "compare/frames.csv", "compare/patterns.csv",
                          "compare/shared.3.B:2.B.semsyn.fuzzy.tsv", "grammar/Frames.gf-abs.txt",
                          "grammar/LU_SweFN.gf-abs.txt", "evaluate/coverage.csv", "manifest.json"}) {
    EXPECT_TRUE(ta.count(rel)) << rel;
  }
  for (const auto& [rel, digest] : ra.outputs) EXPECT_EQ(sha256_hex(ta.at(rel)), digest) << rel;

  const auto manifest = nlohmann::json::parse(ta.at("manifest.json"));
  EXPECT_EQ(manifest["tool"], "fngram");
  EXPECT_EQ(manifest["outputs"].size(), ra.outputs.size());
  std::set<std::string> inputs;
  for (const auto& in : manifest["inputs"]) inputs.insert(in["path"].get<std::string>());
  EXPECT_EQ(inputs, (std::set<std::string>{"bfn/desiring_want.xml", "bfn/desiring_more.xml", "bfn/other_frames.xml",
                                           "swefn/corpus.xml", "frames.tsv"}));
  EXPECT_EQ(manifest.dump().find(a.string()), std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, ThreadCountDoesNotChangeOutputs) {
  const auto ws = scratch("threads");
  const auto config = synthetic::write_workspace(ws, 3000, 600, 12);
  auto cfg = load_pipeline_config(config);
  cfg.threads = 1;
  run_pipeline(cfg, ws / "one");
  cfg.threads = 4;
  run_pipeline(cfg, ws / "four");
  EXPECT_EQ(tree(ws / "one"), tree(ws / "four"));
  fs::remove_all(ws);
}

TEST(Run, StageErrorsNameStageAndInput) {
  const auto ws = scratch("broken");
  fs::copy(fixtures::dir(), ws / "in", fs::copy_options::recursive);
  write_file(ws / "in/bfn/other_frames.xml", "<corpus><lexUnit name=\"x.v\"");
  const auto cfg = load_pipeline_config(ws / "in/pipeline.json");
  try {
    run_pipeline(cfg, ws / "out");
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_EQ(e.context(), "bfn/other_frames.xml");
  }

  write_file(ws / "in/bfn/other_frames.xml", read_file(fixtures::path("bfn/other_frames.xml")));
  write_file(ws / "in/frames.tsv", "Desiring\tcore\tExperiencer\nDesiring\tnoncore\tExperiencer\n");
  try {
    run_pipeline(load_pipeline_config(ws / "in/pipeline.json"), ws / "out");
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "frames");
  }
  fs::remove_all(ws);
}
