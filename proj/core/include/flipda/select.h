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

// Classifier-scored candidate selection.
//
// A candidate's direction is (source example label -> classifier argmax).
// All strategies share one eligibility rule, then differ in how they pick
// from the eligible pool:
//   default       per source and target label, the single most probable
//                 candidate whose argmax is that label
//   global_topk   per direction, the K most probable candidates
//   global_topp   per direction, every candidate with p >= threshold
//   diverse_topk  per direction, round-robin over sources by rank until K
// Ties are broken by source order, then candidate order.

#ifndef FLIPDA_SELECT_H_
#define FLIPDA_SELECT_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flipda/backends.h"
#include "flipda/corpus.h"
#include "flipda/task.h"

namespace flipda {

struct Direction {
  std::string from;
  std::string to;

  bool Flipped() const { return from != to; }
  // "from->to".
  std::string Name() const;
  static Direction Parse(std::string_view text);

  auto operator<=>(const Direction&) const = default;
};

// Every (from, to) pair the task's flip policy allows.
std::vector<Direction> AllDirections(const TaskSpec& task);

struct ScoredCandidate {
  CandidateRecord candidate;
  std::vector<double> probs;
  std::string argmax_label;
  double p_max = 0.0;
  std::string source_label;
  // Position of the source example in the dataset.
  std::size_t source_index = 0;
  // Position of the candidate in the scored input.
  std::size_t candidate_index = 0;

  Direction direction() const { return {source_label, argmax_label}; }
};

// First maximal entry; std::invalid_argument on empty input.
std::size_t ArgMax(const std::vector<double>& probs);

struct ScoreOptions {
  std::size_t batch_size = 32;
  // Skip candidates that failed the consistency check.
  bool drop_inconsistent = false;
};

// Throws SelectError(kUnknownSource) for candidates whose source is not in
// `dataset`; backend errors are rethrown with the failing batch index.
std::vector<ScoredCandidate> ScoreCandidates(
    const std::vector<CandidateRecord>& candidates, const TaskSpec& task,
    const Dataset& dataset, ClassifierBackend& classifier,
    const ScoreOptions& options = {});

enum class Strategy { kDefault, kGlobalTopK, kGlobalTopP, kDiverseTopK };

const char* StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

struct SelectionConfig {
  Strategy strategy = Strategy::kDefault;
  // Absolute K; takes precedence over rate_percent.
  std::optional<std::size_t> k;
  // K as a percentage of each direction's pool, rounded up.
  std::optional<int> rate_percent;
  double p_threshold = 0.9;
  // Allowed directions; all when unset.
  std::optional<std::set<Direction>> directions;
  bool require_label_agreement = true;
  bool include_preserved = true;
  bool include_flipped = true;

  // Throws SelectError(kInvalidConfig). Without `allow_any`, rates are
  // limited to 10/20 and thresholds to 0.9/0.95.
  void Validate(bool allow_any = false) const;
  // Selection budget for a pool of `pool_size`.
  std::size_t BudgetFor(std::size_t pool_size) const;
};

struct Selection {
  CandidateRecord candidate;
  std::string assigned_label;
  double p_assigned = 0.0;
  std::string source_label;
  std::size_t source_index = 0;
  std::size_t candidate_index = 0;
};

struct SelectionResult {
  // Ordered by direction (label-set order), then source, then candidate.
  std::vector<Selection> selected;
  std::map<Direction, std::size_t> per_direction_counts;
  std::size_t skipped_empty_sets = 0;
};

// Whether `scored` may be selected at all under `cfg`.
bool IsEligible(const ScoredCandidate& scored, const TaskSpec& task,
                const SelectionConfig& cfg);

std::vector<ScoredCandidate> FilterDirections(
    const std::vector<ScoredCandidate>& scored,
    const std::set<Direction>& directions);

SelectionResult SelectDefault(const std::vector<ScoredCandidate>& scored,
                              const TaskSpec& task, const Dataset& dataset,
                              const SelectionConfig& cfg);
SelectionResult SelectGlobalTopK(const std::vector<ScoredCandidate>& scored,
                                 const TaskSpec& task,
                                 const SelectionConfig& cfg);
SelectionResult SelectGlobalTopP(const std::vector<ScoredCandidate>& scored,
                                 const TaskSpec& task,
                                 const SelectionConfig& cfg);
SelectionResult SelectDiverseTopK(const std::vector<ScoredCandidate>& scored,
                                  const TaskSpec& task,
                                  const SelectionConfig& cfg);

// Dispatches on cfg.strategy.
SelectionResult Select(const std::vector<ScoredCandidate>& scored,
                       const TaskSpec& task, const Dataset& dataset,
                       const SelectionConfig& cfg);

// Example built from a candidate; choices and entities come from the source.
Example CandidateToExample(const CandidateRecord& candidate,
                           const Example& source, std::string label,
                           std::string id);

// Originals once, then the selections in result order. Augmented ids are
// "<source>#flipda<n>".
Dataset AssembleTrainingSet(const Dataset& original,
                            const SelectionResult& result);

// Originals repeated `copies` times (copy c > 0 gets id "<id>#<c>"), then
// every augmented example.
Dataset AssembleBaselineSet(const Dataset& original, const Dataset& augmented,
                            std::size_t copies);

// Default for require_label_agreement: true when at least `min_rate` of the
// first `slice` records passed the consistency check.
bool ResolveLabelAgreement(const std::vector<CandidateRecord>& records,
                           double min_rate = 0.5, std::size_t slice = 100);

}  // namespace flipda

#endif  // FLIPDA_SELECT_H_
