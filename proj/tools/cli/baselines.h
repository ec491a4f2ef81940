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

#ifndef FLIPDA_TOOLS_CLI_BASELINES_H_
#define FLIPDA_TOOLS_CLI_BASELINES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "config.h"
#include "flipda/backends.h"
#include "flipda/corpus.h"
#include "flipda/lexops.h"
#include "flipda/task.h"

namespace flipda::cli {

struct BaselineContext {
  const TaskSpec* task = nullptr;
  const BaselineSettings* settings = nullptr;
  const LexiconIndex* lexicon = nullptr;
  InfillBackend* infill = nullptr;
  TranslatorBackend* translator = nullptr;
};

// Label-preserving variants of `example` from one baseline augmenter. Only
// the task's augmentable fields are rewritten; every variant keeps the
// source label and passes consistency by construction.
std::vector<CandidateRecord> AugmentWithBaseline(
    const std::string& method, const Example& example,
    const BaselineContext& context, std::uint64_t example_seed,
    std::vector<std::string>* warnings);

// Replaces round_half_up(ratio x words) random words of `text` with one
// multi-blank infill request.
std::string MaskAndFill(const std::string& text, double ratio,
                        InfillBackend& backend, Rng& rng);

}  // namespace flipda::cli

#endif  // FLIPDA_TOOLS_CLI_BASELINES_H_
