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

#include "flipda/corpus.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "flipda/error.h"
#include "flipda/task.h"
#include "support/fixtures.h"

namespace flipda {
namespace {

using testing::DataPath;
using testing::ScratchDir;

TEST(DatasetTest, LoadsThirtyTwoRteExamples) {
  const Dataset data = testing::LoadRte32();
  ASSERT_EQ(data.size(), 32u);
  for (const auto& ex : data) {
    EXPECT_TRUE(ex.label == "entailment" || ex.label == "not_entailment");
    EXPECT_TRUE(ex.fields.count("premise"));
    EXPECT_TRUE(ex.fields.count("hypothesis"));
  }
  EXPECT_EQ(data[0].id, "0");
}

TEST(DatasetTest, EmptyInputGivesEmptyDataset) {
  std::istringstream in("");
  EXPECT_TRUE(ParseDataset(in, BuiltinTask("rte")).empty());
}

TEST(DatasetTest, UnknownLabelReportsLine) {
  std::istringstream in(
      R"({"premise":"a","hypothesis":"b","label":"entailment"})"
      "\n"
      R"({"premise":"a","hypothesis":"b","label":"maybe"})");
  try {
    ParseDataset(in, BuiltinTask("rte"));
    FAIL() << "expected CorpusError";
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kUnknownLabel);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(DatasetTest, MissingFieldAndDuplicateId) {
  std::istringstream missing(R"({"premise":"a","label":"entailment"})");
  try {
    ParseDataset(missing, BuiltinTask("rte"));
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kMissingField);
  }
  std::istringstream dup(
      R"({"idx":1,"premise":"a","hypothesis":"b","label":"entailment"})"
      "\n"
      R"({"idx":1,"premise":"c","hypothesis":"d","label":"entailment"})");
  try {
    ParseDataset(dup, BuiltinTask("rte"));
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kDuplicateId);
  }
}

TEST(DatasetTest, IdsDefaultToTaskAndLine) {
  std::istringstream in(
      R"({"premise":"a","hypothesis":"b","label":"entailment"})");
  EXPECT_EQ(ParseDataset(in, BuiltinTask("rte"))[0].id, "rte:1");
}

TEST(DatasetTest, BoolLabelsAndNestedWscFields) {
  std::istringstream in(
      R"({"idx":0,"text":"Mark told Pete he was late.","target":)"
      R"({"span1_text":"Pete","span2_text":"he"},"label":false})");
  const Dataset data = ParseDataset(in, BuiltinTask("wsc"));
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0].label, "false");
  EXPECT_EQ(data[0].fields.at("span1_text"), "Pete");
}

TEST(DatasetTest, CopaChoicesAndRoundTrip) {
  const TaskSpec& copa = BuiltinTask("copa");
  std::istringstream in(
      R"({"idx":3,"premise":"The man fell.","question":"cause",)"
      R"("choice1":"He slipped.","choice2":"He sang.","label":0})");
  const Dataset data = ParseDataset(in, copa);
  ASSERT_TRUE(data[0].choices.has_value());
  EXPECT_EQ((*data[0].choices)[1], "He sang.");
  std::ostringstream out;
  WriteDataset(out, data, copa);
  std::istringstream back(out.str());
  EXPECT_EQ(ParseDataset(back, copa), data);
  EXPECT_NE(out.str().find("\"label\":0"), std::string::npos);
}

TEST(DatasetTest, SaveLoadRoundTrip) {
  ScratchDir dir("corpus");
  const Dataset data = testing::LoadRte32();
  SaveDataset(dir / "rte.jsonl", data, BuiltinTask("rte"));
  EXPECT_EQ(LoadDataset(dir / "rte.jsonl", BuiltinTask("rte")), data);
}

CandidateRecord MakeCandidate(int i, std::string text) {
  CandidateRecord c;
  c.source_id = std::to_string(i % 4);
  c.fields = {{"premise", std::move(text)}, {"hypothesis", "h"}};
  c.intended_label = i % 2 ? "entailment" : "not_entailment";
  c.generation = {"flipda", 0.5, "greedy", "default",
                  0xfedcba9876543210ULL + static_cast<unsigned>(i)};
  c.consistency_ok = i % 3 == 0;
  if (i % 5 == 0) c.answers = std::vector<std::string>{"Oslo"};
  return c;
}

TEST(CandidateTest, SaveThenLoadIsIdentity) {
  ScratchDir dir("cands");
  std::vector<CandidateRecord> cands;
  for (int i = 0; i < 10; ++i)
    cands.push_back(MakeCandidate(i, "t" + std::to_string(i)));
  SaveCandidates(dir / "c.jsonl", cands);
  EXPECT_EQ(LoadCandidates(dir / "c.jsonl"), cands);
}

TEST(CandidateTest, EmptyListWritesEmptyFile) {
  ScratchDir dir("empty");
  SaveCandidates(dir / "c.jsonl", {});
  EXPECT_EQ(testing::ReadText(dir / "c.jsonl"), "");
  EXPECT_TRUE(LoadCandidates(dir / "c.jsonl").empty());
}

TEST(CandidateTest, UnicodeSurvivesRoundTrip) {
  std::mt19937_64 gen(11);
  const std::vector<std::string> pieces = {"a",  "é",  "日本", "🙂", " ", "\"",
                                           "\\", "\t", "ß",    "Ω",  "\n"};
  std::vector<CandidateRecord> cands;
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const int n = static_cast<int>(gen() % 12);
    for (int j = 0; j < n; ++j) s += pieces[gen() % pieces.size()];
    cands.push_back(MakeCandidate(i, s));
  }
  std::ostringstream out;
  WriteCandidates(out, cands);
  std::istringstream in(out.str());
  EXPECT_EQ(ParseCandidates(in), cands);
}

TEST(CandidateTest, TruncatedLastLineIsMalformed) {
  std::ostringstream out;
  const std::vector<CandidateRecord> cands = {MakeCandidate(0, "a"),
                                              MakeCandidate(1, "b")};
  WriteCandidates(out, cands);
  std::string text = out.str();
  text.resize(text.size() - 10);
  std::istringstream in(text);
  try {
    ParseCandidates(in);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kMalformedLine);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(CandidateTest, UnknownSourceAcceptedAtLoad) {
  std::istringstream in(CandidateToLine(MakeCandidate(7, "x")) + "\n");
  auto cands = ParseCandidates(in);
  cands[0].source_id = "nowhere";
  std::istringstream again(CandidateToLine(cands[0]) + "\n");
  EXPECT_EQ(ParseCandidates(again)[0].source_id, "nowhere");
}

TEST(CandidateTest, AnnotationIsWrittenAndIgnoredOnLoad) {
  const auto c = MakeCandidate(2, "p");
  CandidateAnnotation note{"entailment", 0.875};
  const std::string line = CandidateToLine(c, &note);
  EXPECT_NE(line.find("\"assigned_label\":\"entailment\""), std::string::npos);
  std::istringstream in(line);
  EXPECT_EQ(ParseCandidates(in)[0], c);
}

TEST(CandidateTest, FindExample) {
  const Dataset data = testing::LoadRte32();
  EXPECT_EQ(FindExample(data, "5"), 5u);
  EXPECT_FALSE(FindExample(data, "99").has_value());
}

}  // namespace
}  // namespace flipda
