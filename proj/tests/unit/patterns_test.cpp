#include <gtest/gtest.h>

#include <sstream>

#include "fngram/patterns.hpp"
#include "support/oracle.hpp"

using namespace fngram;

TEST(FeToken, ParsesEveryComponent) {
  auto r = parse_fe_token("Opt_Degree_Adv[for]");
  EXPECT_EQ(r.fe_name, "Degree");
  EXPECT_EQ(r.type, "Adv");
  EXPECT_EQ(r.coreness, Coreness::NonCore);
  EXPECT_EQ(r.preposition, "for");
  EXPECT_EQ(r.function, SynFunction::None);

  auto s = parse_fe_token("Focal_participant_NP.Subj");
  EXPECT_EQ(s.fe_name, "Focal_participant");
  EXPECT_EQ(s.type, "NP");
  EXPECT_EQ(s.function, SynFunction::Subj);
  EXPECT_EQ(s.token(), "Focal_participant_NP.Subj");

  auto n = parse_fe_token("Event_VPto.Dep");
  EXPECT_EQ(n.type, "VPto.Dep");
  EXPECT_EQ(n.function, SynFunction::None);

  EXPECT_THROW(parse_fe_token("Event"), Error);
  EXPECT_THROW(parse_fe_token("Event_Adv[for"), Error);
}

TEST(LuRef, LemmaAndPos) {
  EXPECT_EQ(parse_lu_ref("want.v.6412").lemma, "want");
  EXPECT_EQ(parse_lu_ref("want.v.6412").pos, "v");
  EXPECT_EQ(parse_lu_ref("känna_för.vb.1").lemma, "känna_för");
  EXPECT_EQ(parse_lu_ref("vilja..1").lemma, "vilja");
  EXPECT_EQ(parse_lu_ref("vilja..1").pos, "");
  EXPECT_TRUE(is_verb_lu("vilja..1"));
  EXPECT_FALSE(is_verb_lu("desire.n.6414"));
  EXPECT_FALSE(is_verb_lu("åtrå.nn.2"));
}

TEST(PatternLines, RoundTripRandomPatterns) {
  oracle::PatternGenerator gen(3);
  const auto patterns = gen.corpus(300);
  std::stringstream buf;
  write_patterns(buf, patterns);
  EXPECT_EQ(read_patterns(buf), patterns);
}

TEST(PatternLines, Format) {
  auto p = parse_pattern_line("Desiring\tAct\tExperiencer_NP.Subj Event_Adv[for]\twant.v.6412\t900004");
  EXPECT_EQ(p.frame, "Desiring");
  EXPECT_EQ(p.voice, Voice::Act);
  ASSERT_EQ(p.realizations.size(), 2u);
  EXPECT_EQ(p.realizations[1].preposition, "for");
  EXPECT_EQ(format_pattern_line(p), "Desiring\tAct\tExperiencer_NP.Subj Event_Adv[for]\twant.v.6412\t900004");
  EXPECT_THROW(parse_pattern_line("Desiring\tAct"), Error);
}
