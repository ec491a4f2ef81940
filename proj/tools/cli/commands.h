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

// Subcommand implementations. Each writes its files under the configured
// output directory, prints a short summary to `out` and logs events. Errors
// are thrown; the caller maps them to exit codes.

#ifndef FLIPDA_TOOLS_CLI_COMMANDS_H_
#define FLIPDA_TOOLS_CLI_COMMANDS_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.h"
#include "flipda/backends.h"
#include "flipda/corpus.h"
#include "flipda/select.h"
#include "log.h"

namespace flipda::cli {

inline constexpr char kCandidatesFile[] = "candidates.jsonl";
inline constexpr char kSelectionFile[] = "selection.jsonl";
inline constexpr char kTrainFile[] = "train_augmented.jsonl";
inline constexpr char kReportText[] = "report.txt";
inline constexpr char kReportJsonl[] = "report.jsonl";
inline constexpr char kSweepFile[] = "sweep.jsonl";

struct Services {
  std::unique_ptr<InfillBackend> infill;
  std::unique_ptr<ClassifierBackend> classifier;
  std::unique_ptr<TranslatorBackend> translator;
};

// HTTP clients for an http:// endpoint, in-process stubs otherwise.
Services MakeServices(const RunConfig& config);

struct AugmentOutcome {
  std::vector<CandidateRecord> candidates;
  // Keyed by (source label -> intended label).
  std::map<Direction, std::size_t> counts;
  std::size_t consistent = 0;
  std::size_t degenerate = 0;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  bool backend_failed = false;
};

AugmentOutcome Augment(const RunConfig& config, const TaskSpec& task,
                       const Dataset& dataset, Services& services);

struct SelectOutcome {
  bool require_label_agreement = true;
  bool baseline_mix = false;
  SelectionResult result;
  Dataset train;
};

SelectOutcome SelectAndAssemble(const RunConfig& config, const TaskSpec& task,
                                const Dataset& dataset,
                                const std::vector<CandidateRecord>& candidates,
                                Services& services);

// Returns the exit code: 0, or 2 when some generation hit a backend error.
int CmdAugment(const RunConfig& config, std::ostream& out, Logger& log);

int CmdSelect(const RunConfig& config,
              const std::optional<std::filesystem::path>& cache,
              std::ostream& out, Logger& log);

struct EvaluateArgs {
  std::vector<std::filesystem::path> cells;
  std::vector<std::filesystem::path> predictions;
  // task -> gold dataset; overrides the config's gold map.
  std::map<std::string, std::filesystem::path> gold;
  std::optional<std::string> baseline;
};

int CmdEvaluate(const RunConfig& config, const EvaluateArgs& args,
                std::ostream& out, Logger& log);

// Re-renders reports from cell files (default: the output directory's
// report.jsonl).
int CmdReport(const RunConfig& config,
              const std::vector<std::filesystem::path>& cells,
              const std::optional<std::string>& baseline, std::ostream& out,
              Logger& log);

int CmdSweep(const RunConfig& config, std::ostream& out, Logger& log);

}  // namespace flipda::cli

#endif  // FLIPDA_TOOLS_CLI_COMMANDS_H_
