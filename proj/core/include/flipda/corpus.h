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

// Examples, candidate records, and their line-delimited JSON files.
//
// Dataset lines carry the task's text fields plus "label"; "idx",
// "choices" (or "choice1"/"choice2"), "entities" and "answers" are optional.
// String members of nested objects are hoisted when a text field is not
// found at top level, so FewGLUE WSC lines ({"target": {"span1_text": ...}})
// load unchanged. Lines without "idx" get the id "<task>:<line number>".
//
// Candidate cache lines:
//   {"source_id": ..., "fields": {...}, "intended_label": ...,
//    "generation": {"method", "mask_ratio", "decode", "fill_strategy",
//                   "seed"},
//    "consistency_ok": bool, ["answers": [...]],
//    ["assigned_label": ..., "p_assigned": ...]}

#ifndef FLIPDA_CORPUS_H_
#define FLIPDA_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "flipda/task.h"

namespace flipda {

struct Example {
  std::string id;
  std::map<std::string, std::string> fields;
  std::string label;
  std::optional<std::vector<std::string>> choices;
  std::optional<std::vector<std::string>> entities;
  std::optional<std::vector<std::string>> answers;

  bool operator==(const Example&) const = default;
};

using Dataset = std::vector<Example>;

struct GenerationParams {
  std::string method;
  double mask_ratio = 0.0;
  std::string decode;
  std::string fill_strategy;
  std::uint64_t seed = 0;

  bool operator==(const GenerationParams&) const = default;
};

struct CandidateRecord {
  std::string source_id;
  std::map<std::string, std::string> fields;
  std::string intended_label;
  GenerationParams generation;
  bool consistency_ok = false;
  // ReCoRD: the entity substituted for the placeholder.
  std::optional<std::vector<std::string>> answers;

  bool operator==(const CandidateRecord&) const = default;
};

// Classifier assignment written next to a selected candidate.
struct CandidateAnnotation {
  std::string assigned_label;
  double p_assigned = 0.0;
};

Dataset ParseDataset(std::istream& in, const TaskSpec& task);
Dataset LoadDataset(const std::filesystem::path& path, const TaskSpec& task);

// Writes examples in the dataset line format with labels in the task's
// original encoding.
void WriteDataset(std::ostream& out, const Dataset& dataset,
                  const TaskSpec& task);
void SaveDataset(const std::filesystem::path& path, const Dataset& dataset,
                 const TaskSpec& task);

std::string CandidateToLine(const CandidateRecord& record,
                            const CandidateAnnotation* annotation = nullptr);
void WriteCandidates(std::ostream& out,
                     std::span<const CandidateRecord> candidates);
void SaveCandidates(const std::filesystem::path& path,
                    std::span<const CandidateRecord> candidates);
// `annotations` must be parallel to `candidates`.
void SaveAnnotatedCandidates(const std::filesystem::path& path,
                             std::span<const CandidateRecord> candidates,
                             std::span<const CandidateAnnotation> annotations);

std::vector<CandidateRecord> ParseCandidates(std::istream& in);
std::vector<CandidateRecord> LoadCandidates(const std::filesystem::path& path);

// Index of the example with `id`, or std::nullopt.
std::optional<std::size_t> FindExample(const Dataset& dataset,
                                       std::string_view id);

}  // namespace flipda

#endif  // FLIPDA_CORPUS_H_
