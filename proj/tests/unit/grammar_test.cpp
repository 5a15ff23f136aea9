#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fngram/grammar.hpp"
#include "fngram/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace fngram;

namespace {

ValencePattern val(const std::string& fes, Voice voice = Voice::Act, int count = 1, std::string frame = "Desiring") {
  ValencePattern v;
  v.frame = std::move(frame);
  v.voice = voice;
  v.count = count;
  std::vector<FeRealization> rs;
  for (const auto& t : text::split_nonempty(fes, ',')) rs.push_back(parse_fe_token(t));
  v.fes = valence_fes(rs);
  return v;
}

SentencePattern sent(const std::string& frame, const std::string& fes, const std::string& lu) {
  SentencePattern p;
  p.frame = frame;
  p.lu_ref = lu;
  p.sentence_id = lu;
  for (const auto& t : text::split_nonempty(fes, ' ')) p.realizations.push_back(parse_fe_token(t));
  return p;
}

std::string without_input_lines(const std::string& s) {
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("-- input ", 0) != 0) out += line + "\n";
  }
  return out;
}

std::string golden(const std::string& name) { return read_file(fixtures::path("golden/" + name)); }

/// Grammar of the bundled pipeline's first comparison.
std::map<std::string, std::string> bundled_grammar() {
  const auto b = fixtures::load();
  const auto lv = b.left.settings("2.B").valences;
  const auto rv = b.right.settings("2.B").valences;
  const auto shared = intersect(lv, rv, MatchLevel::SemanticSyntactic, MatchMode::Fuzzy);
  GrammarHeader h{"2.B:2.B semsyn fuzzy", {}};
  const auto g = build_grammar(shared, {{"BFN", b.left.kept("2.B")}, {"SweFN", b.right.kept("2.B")}}, h);
  return emit_abstract_syntax(g);
}

}  // namespace

TEST(VerbArity, CountsObjectsOfCoreFes) {
  EXPECT_EQ(verb_arity_of(val("Experiencer_NP.Subj,Event_Adv").fes), VerbArity::V);
  EXPECT_EQ(verb_arity_of(val("Experiencer_NP.Subj,Event_VP").fes), VerbArity::V2);
  EXPECT_EQ(verb_arity_of(val("Experiencer_NP.Subj,Focal_participant_NP.Obj").fes), VerbArity::V2);
  EXPECT_EQ(verb_arity_of(val("Donor_NP.Subj,Recipient_NP.Obj,Theme_NP.Obj").fes), VerbArity::V3);
  EXPECT_EQ(verb_arity_of(val("Experiencer_NP.Subj,Opt_Time_NP.Obj").fes), VerbArity::V);
}

TEST(FrameFunctions, AlphabeticalArgumentsAndVoiceSuffixes) {
  std::vector<ValencePattern> a{val("Focal_participant_NP.Obj,Experiencer_NP.Subj", Voice::Act, 10),
                                val("Focal_participant_NP.Subj,Experiencer_NP.Obj", Voice::Pass, 2),
                                val("Event_VP,Experiencer_NP.Subj", Voice::Act, 5)};
  auto b = a;
  const auto shared = intersect(a, b, MatchLevel::SemanticSyntactic, MatchMode::Fuzzy);
  const auto fns = derive_frame_functions(shared);
  ASSERT_EQ(fns.size(), 3u);
  std::set<std::string> sigs;
  for (const auto& f : fns) sigs.insert(f.name + " : " + f.signature());
  EXPECT_EQ(sigs, (std::set<std::string>{"Desiring_P1_Act : Experiencer_NP -> Focal_participant_NP -> V2 -> Clause",
                                          "Desiring_P1_Pass : Experiencer_NP -> Focal_participant_NP -> V2 -> Clause",
                                          "Desiring_P2 : Event_VP -> Experiencer_NP -> V2 -> Clause"}));
}

TEST(FrameFunctions, GivingWithTwoObjectsIsV3) {
  std::vector<ValencePattern> a{val("Donor_NP.Subj,Recipient_NP.Obj,Theme_NP.Obj", Voice::Act, 1, "Giving")};
  const auto shared = intersect(a, a, MatchLevel::SemanticSyntactic, MatchMode::Exact);
  const auto fns = derive_frame_functions(shared);
  ASSERT_EQ(fns.size(), 1u);
  EXPECT_EQ(fns[0].name + " : " + fns[0].signature(), "Giving_P1 : Donor_NP -> Recipient_NP -> Theme_NP -> V3 -> Clause");
}

TEST(FrameFunctions, NonCoreStrippedUnlessRequested) {
  std::vector<ValencePattern> a{val("Experiencer_NP.Subj,Opt_Degree_Adv,Event_VP")};
  const auto shared = intersect(a, a, MatchLevel::SemanticSyntactic, MatchMode::Exact);
  auto plain = derive_frame_functions(shared);
  ASSERT_EQ(plain.size(), 1u);
  EXPECT_EQ(plain[0].args, (std::vector<std::string>{"Event_VP", "Experiencer_NP"}));
  for (const auto& c : derive_fe_categories(shared)) EXPECT_FALSE(c.optional);
  auto full = derive_frame_functions(shared, GrammarOptions{true});
  EXPECT_EQ(full[0].args, (std::vector<std::string>{"Event_VP", "Experiencer_NP", "Opt_Degree_Adv"}));
  const auto cats = derive_fe_categories(shared, GrammarOptions{true});
  ASSERT_EQ(cats.size(), 3u);
  EXPECT_TRUE(cats[2].optional);
  EXPECT_EQ(cats[2].rgl_type, RglType::Adv);
}

TEST(FrameFunctions, SemanticSetIsRejected) {
  std::vector<ValencePattern> a{val("Experiencer_NP.Subj")};
  const auto shared = intersect(a, a, MatchLevel::Semantic, MatchMode::Exact);
  EXPECT_THROW(derive_frame_functions(shared), Error);
  EXPECT_THROW(build_grammar(shared, {}, {}), Error);
}

TEST(LuModule, MaximumArityPerLemmaAndFrame) {
  const std::vector<SentencePattern> ps{
      sent("Desiring", "Experiencer_NP.Subj Event_VP", "want.v.6412"),
      sent("Desiring", "Experiencer_NP.Subj Focal_participant_NP.Obj", "want.v.6412"),
      sent("Desiring", "Experiencer_NP.Subj Focal_participant_Adv[for]", "yearn.v.6599"),
      sent("Motion", "Theme_NP.Subj Goal_Adv[to]", "go.v.1"),
      sent("Becoming", "Entity_NP.Subj Final_quality_Adv", "go.v.2"),
      sent("Ingestion", "Ingestor_NP.Subj", "eat.v.3")};
  const auto fns = derive_lu_module(ps, {"Desiring", "Motion", "Becoming"}, "BFN");
  std::vector<std::string> names;
  for (const auto& f : fns) names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"go_V_Becoming", "go_V_Motion", "want_V2_Desiring", "yearn_V_Desiring"}));
}

TEST(LuModule, NonAsciiLemmasAndCollisions) {
  EXPECT_EQ(transliterate_identifier("åtrå"), "åtrå");
  EXPECT_EQ(transliterate_identifier("känna för"), "känna_för");
  EXPECT_EQ(transliterate_identifier("feel-like"), "feel_like");
  const std::vector<SentencePattern> ok{sent("Desiring", "Experiencer_NP.Subj Focal_participant_NP.Obj", "åtrå.vb.1")};
  EXPECT_EQ(derive_lu_module(ok, {"Desiring"}, "SweFN").at(0).name, "åtrå_V2_Desiring");
  const std::vector<SentencePattern> clash{sent("Desiring", "Experiencer_NP.Subj", "känna för.vb.1"),
                                           sent("Desiring", "Experiencer_NP.Subj", "känna_för.vb.1")};
  EXPECT_THROW(derive_lu_module(clash, {"Desiring"}, "SweFN"), Error);
}

TEST(LuModule, ParticleOnlyFramesAreFlagged) {
  const std::vector<SentencePattern> ps{sent("Desiring", "Experiencer_NP.Subj Event_VP", "känna_för.vb.1"),
                                        sent("Motion", "Theme_NP.Subj", "gå..1")};
  const auto fns = derive_lu_module(ps, {"Desiring", "Motion"}, "SweFN");
  EXPECT_EQ(particle_only_frames(fns), std::vector<std::string>{"Desiring"});
}

TEST(CheckGrammar, ClosedWorldAndUniqueness) {
  AbstractGrammar g;
  g.categories = {{"Experiencer_NP", RglType::NP, false}};
  FrameFunction f;
  f.name = "Desiring_P1";
  f.frame = "Desiring";
  f.args = {"Experiencer_NP"};
  g.functions = {f};
  EXPECT_NO_THROW(check_grammar(g));
  auto undeclared = g;
  undeclared.functions[0].args = {"Event_VP", "Experiencer_NP"};
  EXPECT_THROW(check_grammar(undeclared), Error);
  auto unsorted = g;
  unsorted.categories.push_back({"Event_VP", RglType::VP, false});
  unsorted.functions[0].args = {"Experiencer_NP", "Event_VP"};
  EXPECT_THROW(check_grammar(unsorted), Error);
  auto dup = g;
  dup.functions.push_back(f);
  EXPECT_THROW(check_grammar(dup), Error);
}

TEST(Emit, BundledGrammarMatchesGoldens) {
  const auto files = bundled_grammar();
  for (const char* name : {"Frames.gf-abs.txt", "FrameFE.gf-abs.txt", "LU_BFN.gf-abs.txt", "LU_SweFN.gf-abs.txt"}) {
    ASSERT_TRUE(files.count(name)) << name;
    EXPECT_EQ(without_input_lines(files.at(name)), golden(name)) << name;
  }
  const auto& frames = files.at("Frames.gf-abs.txt");
  std::istringstream lines(golden("Desiring.gf-abs.txt"));
  std::string line;
  while (std::getline(lines, line)) EXPECT_NE(frames.find(line + "\n"), std::string::npos) << line;
}

TEST(Emit, HeaderRecordsInputs) {
  AbstractGrammar g;
  g.header = {"2.B:2.B semsyn fuzzy", {{"frames.tsv", "abc"}}};
  const auto files = emit_abstract_syntax(g);
  EXPECT_EQ(files.at("FrameFE.gf-abs.txt"),
            "-- FrameFE\n-- generated by fngram 1.0.0\n-- settings: 2.B:2.B semsyn fuzzy\n-- input frames.tsv sha256:abc\n\n");
}
