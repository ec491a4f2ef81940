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

#include "flipda/select.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flipda/error.h"
#include "flipda/stubs.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace flipda {
namespace {

using testing::OracleSelect;
using testing::PicksOf;
using testing::RandomSelectionInstance;

const TaskSpec& Rte() { return BuiltinTask("rte"); }

constexpr char kE[] = "entailment";
constexpr char kN[] = "not_entailment";

Example Source(std::string id, std::string label) {
  Example ex;
  ex.id = std::move(id);
  ex.label = std::move(label);
  ex.fields = {{"premise", "p " + ex.id}, {"hypothesis", "h " + ex.id}};
  return ex;
}

ScoredCandidate Scored(const Dataset& data, std::size_t source,
                       std::size_t index, double p_entail,
                       std::string intended) {
  ScoredCandidate s;
  s.candidate.source_id = data[source].id;
  s.candidate.intended_label = std::move(intended);
  s.candidate.fields = {{"premise", "c" + std::to_string(index)}};
  s.probs = {p_entail, 1.0 - p_entail};
  const bool e = p_entail >= 1.0 - p_entail;
  s.argmax_label = e ? kE : kN;
  s.p_max = e ? p_entail : 1.0 - p_entail;
  s.source_label = data[source].label;
  s.source_index = source;
  s.candidate_index = index;
  return s;
}

TEST(SelectOracleTest, AllStrategiesMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto inst = RandomSelectionInstance(seed);
    const TaskSpec& task = BuiltinTask(inst.task_id);
    for (Strategy strategy : {Strategy::kDefault, Strategy::kGlobalTopK,
                              Strategy::kGlobalTopP, Strategy::kDiverseTopK}) {
      inst.cfg.strategy = strategy;
      for (bool agree : {true, false}) {
        inst.cfg.require_label_agreement = agree;
        const auto got = Select(inst.scored, task, inst.dataset, inst.cfg);
        const auto want = OracleSelect(inst);
        ASSERT_EQ(PicksOf(got), want.picks)
            << "seed " << seed << " " << StrategyName(strategy);
        if (strategy == Strategy::kDefault) {
          ASSERT_EQ(got.skipped_empty_sets, want.skipped);
        }
        std::size_t total = 0;
        for (const auto& [d, n] : got.per_direction_counts) total += n;
        ASSERT_EQ(total, got.selected.size());
      }
    }
  }
}

TEST(SelectDefaultTest, PicksMostProbableFlip) {
  const Dataset data = {Source("a", kE)};
  const std::vector<ScoredCandidate> scored = {Scored(data, 0, 0, 0.4, kN),
                                               Scored(data, 0, 1, 0.2, kN)};
  SelectionConfig cfg;
  const auto r = SelectDefault(scored, Rte(), data, cfg);
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.selected[0].candidate_index, 1u);
  EXPECT_EQ(r.selected[0].assigned_label, kN);
  EXPECT_DOUBLE_EQ(r.selected[0].p_assigned, 0.8);
  EXPECT_EQ(r.skipped_empty_sets, 1u);
  EXPECT_EQ(r.per_direction_counts.at(Direction{kE, kN}), 1u);
}

TEST(SelectDefaultTest, EmptySetAddsNothing) {
  const Dataset data = {Source("a", kE), Source("b", kN)};
  const std::vector<ScoredCandidate> scored = {Scored(data, 0, 0, 0.9, kE)};
  const auto r = SelectDefault(scored, Rte(), data, SelectionConfig{});
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.skipped_empty_sets, 3u);
}

TEST(SelectDefaultTest, AgreementFiltersDisagreeingCandidates) {
  const Dataset data = {Source("a", kE)};
  const std::vector<ScoredCandidate> scored = {Scored(data, 0, 0, 0.1, kE)};
  SelectionConfig cfg;
  EXPECT_TRUE(SelectDefault(scored, Rte(), data, cfg).selected.empty());
  cfg.require_label_agreement = false;
  EXPECT_EQ(SelectDefault(scored, Rte(), data, cfg).selected.size(), 1u);
}

TEST(SelectDefaultTest, TiesGoToEarlierCandidate) {
  const Dataset data = {Source("a", kE)};
  const std::vector<ScoredCandidate> scored = {Scored(data, 0, 0, 0.7, kE),
                                               Scored(data, 0, 1, 0.7, kE)};
  EXPECT_EQ(SelectDefault(scored, Rte(), data, {}).selected[0].candidate_index,
            0u);
}

TEST(GlobalTopKTest, RateAndOversizedK) {
  Dataset data;
  std::vector<ScoredCandidate> scored;
  for (std::size_t i = 0; i < 10; ++i) {
    data.push_back(Source("s" + std::to_string(i), kE));
    scored.push_back(Scored(data, i, i, 0.05 + 0.01 * i, kN));
  }
  SelectionConfig cfg;
  cfg.strategy = Strategy::kGlobalTopK;
  cfg.rate_percent = 20;
  auto r = SelectGlobalTopK(scored, Rte(), cfg);
  ASSERT_EQ(r.selected.size(), 2u);
  EXPECT_EQ(r.selected[0].source_index, 0u);
  EXPECT_EQ(r.selected[1].source_index, 1u);
  cfg.k = 50;
  EXPECT_EQ(SelectGlobalTopK(scored, Rte(), cfg).selected.size(), 10u);
  EXPECT_EQ(cfg.BudgetFor(10), 10u);
  cfg.k.reset();
  cfg.rate_percent = 10;
  EXPECT_EQ(cfg.BudgetFor(11), 2u);
  EXPECT_EQ(cfg.BudgetFor(0), 0u);
}

TEST(GlobalTopPTest, ClosedThreshold) {
  const Dataset data = {Source("a", kE)};
  const std::vector<ScoredCandidate> scored = {Scored(data, 0, 0, 0.95, kE),
                                               Scored(data, 0, 1, 0.85, kE)};
  SelectionConfig cfg;
  cfg.strategy = Strategy::kGlobalTopP;
  auto r = SelectGlobalTopP(scored, Rte(), cfg);
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.selected[0].candidate_index, 0u);
  cfg.p_threshold = 0.95;
  EXPECT_EQ(SelectGlobalTopP(scored, Rte(), cfg).selected.size(), 1u);
}

TEST(DiverseTopKTest, RoundRobinOverSources) {
  Dataset data;
  std::vector<ScoredCandidate> scored;
  std::size_t index = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    data.push_back(Source("s" + std::to_string(s), kE));
    scored.push_back(Scored(data, s, index++, 0.99, kE));
    scored.push_back(Scored(data, s, index++, 0.98, kE));
  }
  SelectionConfig cfg;
  cfg.strategy = Strategy::kDiverseTopK;
  cfg.k = 3;
  const auto r = SelectDiverseTopK(scored, Rte(), cfg);
  ASSERT_EQ(r.selected.size(), 3u);
  for (std::size_t s = 0; s < 3; ++s)
    EXPECT_EQ(r.selected[s].candidate_index, 2 * s);
  cfg.k = 0;
  EXPECT_TRUE(SelectDiverseTopK(scored, Rte(), cfg).selected.empty());
}

TEST(FilterDirectionsTest, KeepsListedPairs) {
  const Dataset data = {Source("a", kE), Source("b", kN)};
  const std::vector<ScoredCandidate> scored = {
      Scored(data, 0, 0, 0.9, kE), Scored(data, 0, 1, 0.1, kN),
      Scored(data, 1, 2, 0.9, kE), Scored(data, 1, 3, 0.1, kN)};
  const auto only = FilterDirections(scored, {{kE, kN}});
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0].candidate_index, 1u);
  const auto all = AllDirections(Rte());
  EXPECT_EQ(FilterDirections(scored, {all.begin(), all.end()}).size(), 4u);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = RandomSelectionInstance(seed);
    std::mt19937_64 gen(seed);
    std::set<Direction> dirs;
    for (const auto& d : AllDirections(BuiltinTask("cb"))) {
      if (gen() % 2) dirs.insert(d);
    }
    std::vector<std::size_t> want;
    for (const auto& s : inst.scored) {
      for (const auto& d : dirs) {
        if (d.from == s.source_label && d.to == s.argmax_label)
          want.push_back(s.candidate_index);
      }
    }
    std::vector<std::size_t> got;
    for (const auto& s : FilterDirections(inst.scored, dirs))
      got.push_back(s.candidate_index);
    ASSERT_EQ(got, want);
  }
}

TEST(AllDirectionsTest, FollowsFlipPolicy) {
  EXPECT_EQ(AllDirections(Rte()).size(), 4u);
  EXPECT_EQ(AllDirections(BuiltinTask("cb")).size(), 9u);
  EXPECT_EQ(AllDirections(BuiltinTask("wsc")).size(), 2u);
  EXPECT_EQ(Direction::Parse("a->b"), (Direction{"a", "b"}));
  EXPECT_EQ((Direction{"x", "y"}).Name(), "x->y");
  EXPECT_THROW(Direction::Parse("ab"), std::invalid_argument);
}

TEST(ScoreTest, StubClassifierProbabilities) {
  const Dataset data = {Source("a", kE)};
  KeywordClassifier clf({{"rabies", kE, 1.0}, {"never", kN, 2.0}});
  std::vector<CandidateRecord> cands(3);
  cands[0].fields = {{"premise", "rabies"}, {"hypothesis", "x"}};
  cands[1].fields = {{"premise", "never rabies"}, {"hypothesis", "x"}};
  cands[2].fields = {{"premise", "nothing"}, {"hypothesis", "x"}};
  for (auto& c : cands) {
    c.source_id = "a";
    c.intended_label = kE;
  }
  ScoreOptions opts;
  opts.batch_size = 2;
  const auto scored = ScoreCandidates(cands, Rte(), data, clf, opts);
  ASSERT_EQ(scored.size(), 3u);
  const double e = std::exp(1.0);
  EXPECT_NEAR(scored[0].probs[0], e / (e + 1), 1e-12);
  EXPECT_EQ(scored[0].argmax_label, kE);
  EXPECT_NEAR(scored[1].probs[1], e / (e + 1), 1e-12);
  EXPECT_EQ(scored[1].argmax_label, kN);
  EXPECT_EQ(scored[2].argmax_label, kE);
  EXPECT_DOUBLE_EQ(scored[2].p_max, 0.5);
  EXPECT_TRUE(ScoreCandidates({}, Rte(), data, clf).empty());
}

TEST(ScoreTest, UnknownSourceDropAndBatchErrors) {
  const Dataset data = {Source("a", kE)};
  KeywordClassifier clf({});
  CandidateRecord c;
  c.source_id = "ghost";
  try {
    ScoreCandidates({c}, Rte(), data, clf);
    FAIL();
  } catch (const SelectError& e) {
    EXPECT_EQ(e.kind(), SelectError::Kind::kUnknownSource);
  }
  c.source_id = "a";
  c.consistency_ok = false;
  ScoreOptions opts;
  opts.drop_inconsistent = true;
  EXPECT_TRUE(ScoreCandidates({c}, Rte(), data, clf, opts).empty());

  class Failing : public ClassifierBackend {
   protected:
    ClassifyResponse DoClassify(const ClassifyRequest& r) override {
      if (r.rendered_inputs[0].find("bad") != std::string::npos) {
        throw BackendError(BackendError::Kind::kTimeout, "late");
      }
      return ClassifyResponse{std::vector<std::vector<double>>(
          r.rendered_inputs.size(), {1.0, 1.0})};
    }
  } failing;
  std::vector<CandidateRecord> cands(3, c);
  cands[2].fields = {{"premise", "p a"}, {"hypothesis", "bad"}};
  opts.drop_inconsistent = false;
  opts.batch_size = 2;
  try {
    ScoreCandidates(cands, Rte(), data, failing, opts);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), BackendError::Kind::kTimeout);
    EXPECT_NE(std::string(e.what()).find("batch 1"), std::string::npos);
  }
}

TEST(ArgMaxTest, FirstOfTies) {
  EXPECT_EQ(ArgMax({0.5, 0.5}), 0u);
  EXPECT_EQ(ArgMax({0.1, 0.6, 0.6}), 1u);
  EXPECT_THROW(ArgMax({}), std::invalid_argument);
}

TEST(AssembleTest, FlipdaAndBaselineCounts) {
  const Dataset original = testing::LoadRte32();
  SelectionResult result;
  for (std::size_t i = 0; i < 40; ++i) {
    Selection s;
    s.source_index = i % 32;
    s.assigned_label = kN;
    s.candidate.fields = original[i % 32].fields;
    result.selected.push_back(s);
  }
  const Dataset train = AssembleTrainingSet(original, result);
  ASSERT_EQ(train.size(), 72u);
  EXPECT_EQ(train[32].id, "0#flipda0");
  EXPECT_EQ(train[64].id, "0#flipda1");
  EXPECT_EQ(AssembleTrainingSet(original, {}), original);

  Dataset augmented(320, original[0]);
  const Dataset mixed = AssembleBaselineSet(original, augmented, 10);
  ASSERT_EQ(mixed.size(), 640u);
  EXPECT_EQ(mixed[0].id, "0");
  EXPECT_EQ(mixed[32].id, "0#1");
}

TEST(AgreementTest, ResolvesFromConsistencyRate) {
  std::vector<CandidateRecord> recs(10);
  EXPECT_FALSE(ResolveLabelAgreement(recs));
  for (int i = 0; i < 5; ++i) recs[i].consistency_ok = true;
  EXPECT_TRUE(ResolveLabelAgreement(recs));
  EXPECT_TRUE(ResolveLabelAgreement({}));
  EXPECT_TRUE(ResolveLabelAgreement(recs, 0.5, 4));
  EXPECT_FALSE(ResolveLabelAgreement(recs, 0.6));
}

TEST(SelectionConfigTest, Validation) {
  SelectionConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.strategy = Strategy::kGlobalTopK;
  EXPECT_THROW(cfg.Validate(), SelectError);
  cfg.rate_percent = 15;
  EXPECT_THROW(cfg.Validate(), SelectError);
  EXPECT_NO_THROW(cfg.Validate(true));
  cfg.rate_percent = 20;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.strategy = Strategy::kGlobalTopP;
  cfg.p_threshold = 0.8;
  EXPECT_THROW(cfg.Validate(), SelectError);
  cfg.p_threshold = 0.95;
  cfg.include_flipped = cfg.include_preserved = false;
  EXPECT_THROW(cfg.Validate(), SelectError);
  EXPECT_EQ(ParseStrategy("diverse_topk"), Strategy::kDiverseTopK);
  EXPECT_THROW(ParseStrategy("best"), SelectError);
}

}  // namespace
}  // namespace flipda
