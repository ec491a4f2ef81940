//
// Copyright 2026 The FlipDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "flipda/backends.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flipda/error.h"
#include "flipda/stubs.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace flipda {
namespace {

template <typename Fn>
BackendError::Kind KindOf(Fn fn) {
  try {
    fn();
  } catch (const BackendError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no BackendError thrown";
  return BackendError::Kind::kTransport;
}

TEST(StubInfillTest, FillsFromLexiconByHash) {
  const std::vector<std::string> lexicon = DefaultStubLexicon();
  StubInfiller stub(lexicon);
  const InfillResponse r = stub.Infill({"The [BLANK_0] sat", 1, {}});
  ASSERT_EQ(r.fills.size(), 1u);
  EXPECT_EQ(r.fills[0],
            testing::OracleStubFill("The [BLANK_0] sat", 0, lexicon, 0));
}

TEST(StubInfillTest, SingleWordLexiconAlwaysAnswersIt) {
  StubInfiller stub({"a"}, 99);
  const auto r = stub.Infill({"[BLANK_1] x [BLANK_0] [BLANK_2]", 3, {}});
  EXPECT_EQ(r.fills, (std::vector<std::string>{"a", "a", "a"}));
}

TEST(StubInfillTest, BlankIndexCyclesWithLexiconPeriod) {
  const std::vector<std::string> lexicon = {"v", "w", "x", "y", "z"};
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(StubInfillFill("ctx", i, lexicon, 3),
              StubInfillFill("ctx", i + 5, lexicon, 3));
    EXPECT_EQ(StubInfillFill("ctx", i, lexicon, 3),
              testing::OracleStubFill("ctx", i, lexicon, 3));
  }
  EXPECT_EQ(StubInfillFill("q", 1, lexicon, 0),
            StubInfillFill("q", 1, lexicon, 0));
  EXPECT_THROW(StubInfillFill("q", 0, {}, 0), std::invalid_argument);
}

TEST(StubInfillTest, OnlySamplingUsesDecodeSeed) {
  const std::vector<std::string> lexicon = DefaultStubLexicon();
  StubInfiller stub(lexicon, 2);
  DecodeParams greedy;
  greedy.seed = 5;
  DecodeParams sample = greedy;
  sample.strategy = DecodeStrategy::kSample;
  EXPECT_EQ(stub.Infill({"a [BLANK_0]", 1, greedy}).fills[0],
            testing::OracleStubFill("a [BLANK_0]", 0, lexicon, 2));
  EXPECT_EQ(stub.Infill({"a [BLANK_0]", 1, sample}).fills[0],
            testing::OracleStubFill("a [BLANK_0]", 0, lexicon, 7));
}

TEST(InfillValidationTest, ZeroBlanksAndSentinelErrors) {
  StubInfiller stub({"a"});
  EXPECT_TRUE(stub.Infill({"no blanks", 0, {}}).fills.empty());
  EXPECT_EQ(KindOf([&] { stub.Infill({"[BLANK_0] [BLANK_0]", 1, {}}); }),
            BackendError::Kind::kPrecondition);
  EXPECT_EQ(KindOf([&] { stub.Infill({"[BLANK_1]", 1, {}}); }),
            BackendError::Kind::kPrecondition);
  EXPECT_EQ(KindOf([&] { stub.Infill({"[BLANK_0]", 2, {}}); }),
            BackendError::Kind::kPrecondition);
  EXPECT_NO_THROW(ValidateInfillRequest({"[BLANK_x] [BLANK_0]", 1, {}}));
}

TEST(InfillValidationTest, WrongFillCountIsMismatch) {
  FunctionInfiller short_by_one(
      [](const InfillRequest&) { return InfillResponse{{"only"}}; });
  EXPECT_EQ(KindOf([&] { short_by_one.Infill({"[BLANK_0][BLANK_1]", 2, {}}); }),
            BackendError::Kind::kBlankCountMismatch);
}

TEST(KeywordClassifierTest, SoftmaxOfSummedWeights) {
  KeywordClassifier clf(
      {{"rabies", "entailment", 1.0}, {"no", "not_entailment", 0.5}});
  const std::vector<std::string> labels = {"entailment", "not_entailment"};
  const auto r = clf.Classify(
      {"rte", {"Rabies, rabies and no cure", "nothing here", "no"}, labels});
  ASSERT_EQ(r.probs.size(), 3u);
  const double e = std::exp(2.0), n = std::exp(0.5);
  EXPECT_NEAR(r.probs[0][0], e / (e + n), 1e-12);
  EXPECT_NEAR(r.probs[0][1], n / (e + n), 1e-12);
  EXPECT_DOUBLE_EQ(r.probs[1][0], 0.5);
  EXPECT_DOUBLE_EQ(r.probs[1][1], 0.5);
  EXPECT_NEAR(r.probs[2][1], std::exp(0.5) / (1 + std::exp(0.5)), 1e-12);
}

TEST(KeywordClassifierTest, FixtureFileAndMalformedLines) {
  const auto clf =
      KeywordClassifier::FromFile(testing::DataPath("rte_weights.tsv"));
  const std::vector<std::string> labels = {"entailment", "not_entailment"};
  const auto scores = clf.Scores("It was never confirmed.", labels);
  EXPECT_DOUBLE_EQ(scores[0], 1.3);
  EXPECT_DOUBLE_EQ(scores[1], 1.2);
  testing::ScratchDir dir("weights");
  testing::WriteText(dir / "bad.tsv", "word\tlabel\n");
  EXPECT_THROW(KeywordClassifier::FromFile(dir / "bad.tsv"),
               std::runtime_error);
}

TEST(ClassifyValidationTest, ShapeAndSign) {
  ClassifyRequest req{"rte", {"a", "b"}, {"x", "y"}};
  ClassifyResponse ok{{{2.0, 2.0}, {1.0, 3.0}}};
  NormalizeClassifyResponse(req, ok);
  EXPECT_DOUBLE_EQ(ok.probs[0][0], 0.5);
  EXPECT_DOUBLE_EQ(ok.probs[1][1], 0.75);
  ClassifyResponse short_rows{{{1.0, 0.0}}};
  EXPECT_EQ(KindOf([&] { NormalizeClassifyResponse(req, short_rows); }),
            BackendError::Kind::kDimensionMismatch);
  ClassifyResponse short_cols{{{1.0}, {1.0}}};
  EXPECT_EQ(KindOf([&] { NormalizeClassifyResponse(req, short_cols); }),
            BackendError::Kind::kDimensionMismatch);
  ClassifyResponse negative{{{-1.0, 2.0}, {1.0, 1.0}}};
  EXPECT_EQ(KindOf([&] { NormalizeClassifyResponse(req, negative); }),
            BackendError::Kind::kProtocol);
  ClassifyResponse zero{{{0.0, 0.0}, {1.0, 1.0}}};
  EXPECT_EQ(KindOf([&] { NormalizeClassifyResponse(req, zero); }),
            BackendError::Kind::kProtocol);
  ClassifyResponse nan{{{NAN, 1.0}, {1.0, 1.0}}};
  EXPECT_EQ(KindOf([&] { NormalizeClassifyResponse(req, nan); }),
            BackendError::Kind::kProtocol);
  KeywordClassifier clf({});
  EXPECT_EQ(KindOf([&] { clf.Classify({"rte", {"a"}, {}}); }),
            BackendError::Kind::kPrecondition);
  EXPECT_TRUE(clf.Classify({"rte", {}, {"x"}}).probs.empty());
}

TEST(TranslatorTest, IdentityAndEmpty) {
  IdentityTranslator t;
  EXPECT_EQ(t.Translate({{"a b", "c"}, "en", "es"}).texts,
            (std::vector<std::string>{"a b", "c"}));
  EXPECT_TRUE(t.Translate({{}, "en", "es"}).texts.empty());
  EXPECT_EQ(KindOf([&] { t.Translate({{"a"}, "en", "en"}); }),
            BackendError::Kind::kPrecondition);
}

TEST(TranslatorTest, DictionaryRoundTripChangesMappedWordsOnly) {
  DictionaryTranslator dict;
  const std::map<std::string, std::string> there = {
      {"house", "casa"}, {"red", "rojo"}, {"big", "grande"}};
  const std::map<std::string, std::string> back = {
      {"casa", "home"}, {"rojo", "red"}, {"grande", "large"}};
  dict.AddPair("en", "es", there);
  dict.AddPair("es", "en", back);
  const std::string text = "The big red house, near a tree.";
  const auto es = dict.Translate({{text}, "en", "es"});
  const auto en = dict.Translate({es.texts, "es", "en"});
  const TokenSeq before = Tokenize(text);
  const TokenSeq after = Tokenize(en.texts[0]);
  ASSERT_EQ(before.tokens.size(), after.tokens.size());
  for (std::size_t i = 0; i < before.tokens.size(); ++i) {
    const std::string& w = before.tokens[i].surface;
    std::string expected = w;
    if (auto a = there.find(w); a != there.end()) expected = back.at(a->second);
    EXPECT_EQ(after.tokens[i].surface, expected);
  }
  EXPECT_EQ(KindOf([&] { dict.Translate({{"x"}, "en", "fr"}); }),
            BackendError::Kind::kUnsupportedLanguagePair);
}

TEST(WireTest, RoundTrips) {
  DecodeParams decode{DecodeStrategy::kBeam, 15, 10, 123456789012345ULL};
  const InfillRequest infill{"x [BLANK_0] é", 1, decode};
  EXPECT_EQ(wire::DecodeInfillRequest(wire::EncodeInfillRequest(infill)),
            infill);
  const InfillResponse fills{{"a", "日本"}};
  EXPECT_EQ(wire::DecodeInfillResponse(wire::EncodeInfillResponse(fills)),
            fills);
  const ClassifyRequest creq{"cb", {"i1", "i2"}, {"a", "b", "c"}};
  EXPECT_EQ(wire::DecodeClassifyRequest(wire::EncodeClassifyRequest(creq)),
            creq);
  const ClassifyResponse cres{{{0.25, 0.75}, {1.0, 0.0}}};
  EXPECT_EQ(wire::DecodeClassifyResponse(wire::EncodeClassifyResponse(cres)),
            cres);
  const TranslateRequest treq{{"hola"}, "es", "en"};
  EXPECT_EQ(wire::DecodeTranslateRequest(wire::EncodeTranslateRequest(treq)),
            treq);
  const TranslateResponse tres{{"hello"}};
  EXPECT_EQ(wire::DecodeTranslateResponse(wire::EncodeTranslateResponse(tres)),
            tres);
}

TEST(WireTest, SchemaViolationsAreProtocolErrors) {
  for (const char* body :
       {"", "[]", "{}", R"({"fills": "a"})", R"({"fills": [1]})"}) {
    EXPECT_EQ(KindOf([&] { wire::DecodeInfillResponse(body); }),
              BackendError::Kind::kProtocol)
        << body;
  }
  EXPECT_EQ(
      KindOf([&] { wire::DecodeClassifyResponse(R"({"probs": [["x"]]})"); }),
      BackendError::Kind::kProtocol);
  EXPECT_EQ(
      KindOf([&] {
        wire::DecodeInfillRequest(
            R"({"text_with_sentinels":"a","blank_count":-1,"decode":{}})");
      }),
      BackendError::Kind::kProtocol);
}

TEST(BackendConfigTest, Validation) {
  BackendConfig c;
  EXPECT_TRUE(c.IsStub());
  EXPECT_NO_THROW(c.Validate());
  c.endpoint = "stub:local";
  EXPECT_TRUE(c.IsStub());
  c.endpoint = "ftp://x";
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.endpoint = "http://127.0.0.1:1";
  c.max_parallel = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  EXPECT_EQ(ParseDecodeStrategy("beam"), DecodeStrategy::kBeam);
  EXPECT_THROW(ParseDecodeStrategy("nucleus"), std::invalid_argument);
}

}  // namespace
}  // namespace flipda
