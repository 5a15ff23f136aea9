#include <gtest/gtest.h>

#include <sstream>

#include "fngram/corpus.hpp"
#include "fngram/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace fngram;

namespace {

const char* kBfnOne = R"(<lexUnit name="want.v" ID="6412" frame="Desiring">
 <sentence ID="1">
  <text>Traders want a change.</text>
  <annotationSet>
   <layer rank="1" name="BNC">
    <label start="0" end="6" name="NN2"/>
    <label start="8" end="11" name="VVB"/>
   </layer>
  </annotationSet>
  <annotationSet ID="77">
   <layer rank="1" name="FE">
    <label start="0" end="6" name="Experiencer"/>
    <label start="13" end="20" name="Event"/>
    <label itype="CNI" name="Focal_participant"/>
   </layer>
   <layer rank="1" name="GF">
    <label start="0" end="6" name="Ext"/>
    <label start="13" end="20" name="Obj"/>
   </layer>
   <layer rank="1" name="PT">
    <label start="0" end="6" name="NP"/>
    <label start="13" end="20" name="NP"/>
   </layer>
   <layer rank="2" name="FE">
    <label start="13" end="20" name="Ignored"/>
   </layer>
   <layer rank="1" name="Target">
    <label start="8" end="11" name="Target"/>
   </layer>
  </annotationSet>
 </sentence>
</lexUnit>
)";

}  // namespace

TEST(BfnIngest, ReadsSpansLayersAndLexicalUnit) {
  auto r = parse_bfn_corpus(kBfnOne);
  ASSERT_EQ(r.sentences.size(), 1u);
  EXPECT_TRUE(r.issues.empty());
  const auto& s = r.sentences.front();
  EXPECT_EQ(s.sentence_id, "1");
  EXPECT_EQ(s.frame, "Desiring");
  EXPECT_EQ(s.lu_ref, "want.v.6412");
  EXPECT_EQ(s.target, (TokenSpan{8, 11}));
  ASSERT_EQ(s.fe_spans.size(), 3u);
  EXPECT_EQ(s.fe_spans[0].fe_name, "Experiencer");
  EXPECT_EQ(s.fe_spans[0].phrase_type, "NP");
  EXPECT_EQ(s.fe_spans[0].gram_function, "Ext");
  EXPECT_EQ(s.fe_spans[1].span, (TokenSpan{13, 20}));
  EXPECT_TRUE(s.fe_spans[2].null_instantiated);
  EXPECT_EQ(s.pos_labels.size(), 2u);
}

TEST(BfnIngest, OffsetsOutsideTextBecomeIssues) {
  std::string doc = kBfnOne;
  const auto at = doc.find("start=\"13\" end=\"20\" name=\"Event\"");
  doc.replace(at, std::string("start=\"13\" end=\"20\"").size(), "start=\"13\" end=\"90\"");
  auto r = parse_bfn_corpus(doc);
  EXPECT_TRUE(r.sentences.empty());
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].sentence_id, "1/77");
  EXPECT_NE(r.issues[0].message.find("Event"), std::string::npos);
}

TEST(BfnIngest, MalformedXmlReportsByteOffset) {
  const std::string doc = "<lexUnit><sentence ID=\"1\"><text>x</text></lexUnit>";
  try {
    parse_bfn_corpus(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), doc.size());
  }
}

TEST(BfnIngest, CodePointOffsets) {
  const std::string doc = R"(<lexUnit name="desire.v" ID="1" frame="Desiring"><sentence ID="2">
<text>Zoë desires tea.</text>
<annotationSet><layer name="BNC"><label start="4" end="10" name="VVZ"/></layer></annotationSet>
<annotationSet><layer name="FE"><label start="0" end="2" name="Experiencer"/><label start="12" end="14" name="Focal_participant"/></layer>
<layer name="PT"><label start="0" end="2" name="NP"/><label start="12" end="14" name="NP"/></layer>
<layer name="Target"><label start="4" end="10" name="Target"/></layer></annotationSet></sentence></lexUnit>)";
  auto r = parse_bfn_corpus(doc);
  ASSERT_EQ(r.sentences.size(), 1u);
  EXPECT_EQ(r.sentences[0].text, "Zoë desires tea.");
  EXPECT_EQ(r.sentences[0].fe_spans[1].span, (TokenSpan{12, 14}));
}

TEST(SwefnIngest, WordsTargetAndElements) {
  const std::string doc = R"(<corpus><frame name="Desiring"><lu name="vilja..1">
<sentence id="a"><element name="Experiencer"><w pos="PN" ref="1" dephead="2" deprel="SS">Vi</w></element>
<element name="LU"><w msd="VB.PRS.AKT" ref="2" deprel="ROOT">vill</w></element>
<element name="Event"><w msd="VB.INF.AKT" ref="3" dephead="2" deprel="VG">äta</w></element>
<w pos="MAD" ref="4" dephead="2" deprel="IP">.</w></sentence>
<sentence id="b"><w pos="PN" ref="1">ingen</w></sentence></lu></frame></corpus>)";
  auto r = parse_swefn_corpus(doc);
  ASSERT_EQ(r.sentences.size(), 1u);
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].sentence_id, "b");
  const auto& s = r.sentences[0];
  EXPECT_EQ(s.frame, "Desiring");
  EXPECT_EQ(s.lu_ref, "vilja..1");
  EXPECT_EQ(s.text, "Vi vill äta .");
  EXPECT_EQ(s.target, (TokenSpan{3, 6}));
  EXPECT_EQ(s.target_refs, std::vector<int>{2});
  ASSERT_EQ(s.fe_spans.size(), 2u);
  EXPECT_EQ(s.fe_spans[1].fe_name, "Event");
  EXPECT_EQ(s.fe_spans[1].span, (TokenSpan{8, 10}));
  EXPECT_EQ(s.words[2].pos, "VB");
  EXPECT_EQ(s.words[2].msd, "VB.INF.AKT");
}

TEST(Jsonl, RoundTripsBundledCorpora) {
  for (auto [file, dialect] : {std::pair{"bfn/desiring_want.xml", Dialect::BfnPhrase},
                               std::pair{"swefn/corpus.xml", Dialect::SwefnDep}}) {
    auto r = parse_corpus(read_file(fixtures::path(file)), dialect);
    ASSERT_FALSE(r.sentences.empty()) << file;
    std::stringstream buf;
    write_jsonl(buf, r.sentences);
    EXPECT_EQ(read_jsonl(buf), r.sentences) << file;
  }
}
