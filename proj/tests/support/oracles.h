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

// Brute-force references the library is checked against. None of these call
// into the code under test beyond plain data types.

#ifndef FLIPDA_TESTS_SUPPORT_ORACLES_H_
#define FLIPDA_TESTS_SUPPORT_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "flipda/corpus.h"
#include "flipda/lexops.h"
#include "flipda/select.h"
#include "flipda/task.h"

namespace flipda::testing {

// Selection.

struct SelectionInstance {
  std::string task_id;
  Dataset dataset;
  std::vector<ScoredCandidate> scored;
  SelectionConfig cfg;
};

// At most 8 sources, 10 candidates per source and 3 labels. Probabilities
// are drawn from a coarse grid so ties are common.
SelectionInstance RandomSelectionInstance(std::uint64_t seed);

struct Pick {
  std::size_t source_index = 0;
  std::size_t candidate_index = 0;
  std::string assigned_label;

  bool operator==(const Pick&) const = default;
};

struct OracleSelection {
  std::vector<Pick> picks;
  std::size_t skipped = 0;
};

OracleSelection OracleSelect(const SelectionInstance& instance);
std::vector<Pick> PicksOf(const SelectionResult& result);

// First index of the largest entry.
std::size_t OracleArgMax(const std::vector<double>& probs);

// Metrics, in percent.

double OracleAccuracy(const std::vector<std::string>& preds,
                      const std::vector<std::string>& golds);
double OracleMacroF1(const std::vector<std::string>& preds,
                     const std::vector<std::string>& golds,
                     const std::vector<std::string>& labels);
double OracleBinaryF1(const std::vector<std::string>& preds,
                      const std::vector<std::string>& golds,
                      const std::string& positive);
double OracleGroupedEm(const std::vector<std::string>& preds,
                       const std::vector<std::string>& golds,
                       const std::vector<std::string>& groups);

// Stub infiller.

std::uint64_t OracleFnv1a(const std::string& bytes);
std::string OracleStubFill(const std::string& context, std::size_t blank,
                           const std::vector<std::string>& lexicon,
                           std::uint64_t seed);

// Rounding of a tenths ratio (3 for 0.3) times a count, half up.
std::size_t OracleTenthsCount(int tenths, std::size_t count);

// Word replacement by the documented draw order: partial Fisher-Yates over
// the ascending eligible positions, a replacement drawn right after a
// position that has candidates.
TokenSeq OracleReplayReplace(
    const TokenSeq& seq, double ratio, const std::vector<std::size_t>& eligible,
    const std::function<std::vector<std::string>(const std::string&)>& pool_of,
    std::uint64_t seed);

// Random examples for any built-in task.
Example RandomExample(const TaskSpec& task, std::mt19937_64& gen,
                      const std::string& id);

}  // namespace flipda::testing

#endif  // FLIPDA_TESTS_SUPPORT_ORACLES_H_
