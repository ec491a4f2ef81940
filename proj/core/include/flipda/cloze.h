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

// Pattern-based cloze generation of label-preserved and label-flipped
// candidates.
//
// An example and a target label are rendered through the task's template
// into one sequence (two for WiC "different" targets). The rendered text is
// kept as spans of tokens: literal pattern text, field text, and the label
// slot. Only word tokens of maskable field spans can be blanked, and fills
// replace token surfaces in place, so every field's new text is read back by
// concatenating its spans no matter how long the fills are.
//
// Per-candidate randomness comes from one seed:
//   candidate_seed = SplitSeed(example_seed, target_label, j)
//   Rng rng(candidate_seed)
//   instance = RenderCloze(..., rng)        // COPA coin, ReCoRD/WiC draws
//   plan     = PlanMask(instance, ratio, rng.Next())
//   fill     = Fill(instance, plan, cfg, backend, rng.Next())
// which is what ReplayCandidate re-executes.

#ifndef FLIPDA_CLOZE_H_
#define FLIPDA_CLOZE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flipda/backends.h"
#include "flipda/corpus.h"
#include "flipda/lexops.h"
#include "flipda/task.h"
#include "flipda/util.h"

namespace flipda {

enum class SpanKind { kLiteral, kField, kLabel };

struct ClozeSpan {
  SpanKind kind = SpanKind::kLiteral;
  std::string field;
  std::vector<Token> tokens;
};

struct ClozeSequence {
  std::vector<ClozeSpan> spans;

  std::string Text() const;
};

struct ClozeInstance {
  std::string task_id;
  std::string source_id;
  std::string source_label;
  std::string target_label;
  // What the label slot says: a verbalizer token, a COPA choice, or a
  // ReCoRD entity.
  std::string label_text;
  std::vector<ClozeSequence> sequences;
  // Task fields that no sequence renders (COPA question, WiC word in split
  // mode); copied into candidates unchanged.
  std::map<std::string, std::string> carried_fields;
  bool question_flipped = false;
  // ReCoRD: the entity standing in the placeholder, and where it stands.
  std::optional<std::string> substituted_answer;
  std::string placeholder_field;
  std::string placeholder_token;

  // Sequences joined with '\n'.
  std::string Text() const;

  // Tokens are addressed by one flat index running through all sequences
  // and spans in order.
  std::size_t TokenCount() const;
  const Token& TokenAt(std::size_t flat) const;
  SpanKind SpanKindAt(std::size_t flat) const;
  std::vector<std::size_t> MaskablePositions() const;
};

struct MaskPlan {
  // Sorted, unique flat token indices.
  std::vector<std::size_t> positions;
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

struct FillStrategy {
  // 0 fills every blank of a sequence in one request; k >= 1 fills k random
  // blanks per request until none remain.
  std::size_t k = 0;

  bool IsDefault() const { return k == 0; }
  // "default" or "rand_iter_<k>".
  std::string Name() const;
  // Throws std::invalid_argument.
  static FillStrategy Parse(std::string_view name);

  bool operator==(const FillStrategy&) const = default;
};

struct FillConfig {
  double mask_ratio = 0.5;
  DecodeStrategy decode = DecodeStrategy::kGreedy;
  FillStrategy fill_strategy;
  std::size_t n_candidates = 10;

  // "greedy", "sample_top15" or "beam10".
  std::string DecodeName() const;
  DecodeParams Decode(std::uint64_t seed) const;
  // Throws std::invalid_argument. The listed mask ratios are 0.3, 0.5 and
  // 0.8; `allow_any_ratio` admits any ratio in (0, 1] (the T5-MLM baseline
  // uses 0.1).
  void Validate(bool allow_any_ratio = false) const;
};

// Parses "greedy", "sample"/"sample_top15", "beam"/"beam10".
DecodeStrategy ParseDecodeName(std::string_view name);

// Renders `example` with `target_label` in its label slot.
//
// Throws ClozeError: kFlipNotAllowed when the task's flip policy forbids the
// target, kMissingChoices / kMissingEntities when COPA choices or ReCoRD
// entities (or the answer pool the target needs) are absent, and
// kInvalidArgument for unknown labels or a query without placeholder.
// `training_pool` supplies WiC context sentences; it may be null.
ClozeInstance RenderCloze(const TaskSpec& task, const Example& example,
                          std::string_view target_label, Rng& rng,
                          const Dataset* training_pool = nullptr);

// Blanks RoundHalfUpCount(ratio, maskable) maskable tokens drawn without
// replacement with Rng(seed). ratio must be in (0, 1].
MaskPlan PlanMask(const ClozeInstance& instance, double ratio,
                  std::uint64_t seed);

struct FillResult {
  std::vector<CandidateRecord> records;
  std::vector<std::string> warnings;
  // The plan was empty; records are unmodified copies.
  bool degenerate = false;
  std::size_t backend_rounds = 0;
};

// Produces cfg.n_candidates records; candidate k uses seed + k for its
// decode seed and its rand_iter blank order. Non-selected blanks show their
// original words while others are being filled. A response with the wrong
// number of fills drops that candidate with a warning; other backend errors
// propagate.
FillResult Fill(const ClozeInstance& instance, const MaskPlan& plan,
                const FillConfig& cfg, InfillBackend& backend,
                std::uint64_t seed);

// Field texts read back from an instance after substituting `fills`
// (flat index -> text). Placeholder fields are re-joined around the
// placeholder token.
std::map<std::string, std::string> ExtractFields(
    const ClozeInstance& instance,
    const std::map<std::size_t, std::string>& fills = {});

// Case-insensitive comparison after trimming whitespace and trailing
// punctuation.
bool LabelMatches(std::string_view fill, std::string_view label_text);

// Renders `fields` through the target's joint template with the label slot
// blanked.
std::string RenderLabelBlank(const TaskSpec& task,
                             const ClozeInstance& instance,
                             const std::map<std::string, std::string>& fields);

// Asks the backend (greedy) to fill the blanked label slot and compares the
// answer with the instance's label text.
bool ConsistencyCheck(const TaskSpec& task, const ClozeInstance& instance,
                      const std::map<std::string, std::string>& fields,
                      InfillBackend& backend);

struct GenerationResult {
  std::vector<CandidateRecord> records;
  std::vector<std::string> warnings;
  // One message per direction that failed part-way.
  std::vector<std::string> errors;
  bool backend_failed = false;
  std::size_t degenerate = 0;
};

std::uint64_t CandidateSeed(std::uint64_t example_seed,
                            std::string_view target_label, std::size_t index);

// For each target label (deduplicated, in label-set order) renders, masks,
// fills and consistency-checks cfg.n_candidates candidates. Throws
// ClozeError(kFlipNotAllowed) before any work if a direction is forbidden;
// failures inside a direction are recorded and the remaining directions
// still run.
GenerationResult GenerateCandidates(const TaskSpec& task,
                                    const Example& example,
                                    const std::vector<std::string>& directions,
                                    const FillConfig& cfg,
                                    InfillBackend& backend,
                                    std::uint64_t example_seed,
                                    const Dataset* training_pool = nullptr);

// Re-runs one candidate of GenerateCandidates from its recorded seed.
CandidateRecord ReplayCandidate(const TaskSpec& task, const Example& example,
                                std::string_view target_label,
                                std::uint64_t candidate_seed,
                                const FillConfig& cfg, InfillBackend& backend,
                                const Dataset* training_pool = nullptr);

// Classifier input for a set of fields: the task's text fields in declared
// order joined by single spaces, followed by the choices when given.
std::string RenderClassifierInput(
    const TaskSpec& task, const std::map<std::string, std::string>& fields,
    const std::vector<std::string>* choices = nullptr);

}  // namespace flipda

#endif  // FLIPDA_CLOZE_H_
