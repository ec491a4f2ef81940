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

#ifndef FLIPDA_TOOLS_CLI_CONFIG_H_
#define FLIPDA_TOOLS_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flipda/backends.h"
#include "flipda/cloze.h"
#include "flipda/select.h"
#include "flipda/task.h"

namespace flipda::cli {

// Invalid configuration or flag values; exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kBackendEnvVar[] = "FLIPDA_BACKEND_URL";

enum class AgreementMode { kAuto, kOn, kOff };

const char* AgreementModeName(AgreementMode mode);

struct StubSettings {
  std::optional<std::filesystem::path> infill_lexicon;
  std::uint64_t infill_seed = 0;
  std::optional<std::filesystem::path> classifier_weights;
};

struct LexiconSettings {
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> stopwords;
};

struct BaselineSettings {
  double ratio = 0.1;
  std::size_t knn_k = 15;
  std::size_t n_aug = 10;
  std::size_t copies = 10;
  double eda_alpha = 0.1;
  std::size_t eda_n_aug = 9;
  bool eda_lowercase = false;
  double tbert_p = 0.4;
  double t5_mask_ratio = 0.1;
  std::size_t max_tokens = 512;
};

struct SweepGrid {
  std::vector<double> mask_ratios;
  std::vector<DecodeStrategy> decodes;
  std::vector<FillStrategy> fills;
  std::vector<AgreementMode> agreement;
};

struct RunConfig {
  std::string task_id;
  std::filesystem::path train;
  std::filesystem::path output_dir = "flipda_out";
  std::map<std::string, std::filesystem::path> gold;
  // "flipda" or a baseline: sr, knn, eda, bt10, bt6, tbert, t5mlm.
  std::string method = "flipda";
  std::uint64_t seed = 0;

  FillConfig fill;
  // Target labels to generate; every label the flip policy allows when
  // unset.
  std::optional<std::vector<std::string>> targets;

  SelectionConfig selection;
  AgreementMode agreement = AgreementMode::kAuto;
  bool drop_inconsistent = false;
  std::size_t batch_size = 32;

  BackendConfig backend;
  // The config file named an endpoint.
  bool backend_endpoint_set = false;
  StubSettings stub;
  LexiconSettings lexicon;
  BaselineSettings baseline;
  std::optional<SweepGrid> sweep;
  std::string baseline_method = "baseline";
  bool unsafe_params = false;
};

// Flag values; unset members leave the config untouched.
struct Overrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend;
  bool stub = false;
  bool unsafe_params = false;
  std::optional<std::filesystem::path> output_dir;
};

const std::vector<std::string>& BaselineMethods();
bool IsBaselineMethod(const std::string& method);

// Parses a config document. Relative paths resolve against `base_dir`.
RunConfig ParseConfig(const std::string& json_text,
                      const std::filesystem::path& base_dir);
RunConfig LoadConfig(const std::filesystem::path& path);

// Layers flags over the config and the environment: the backend endpoint
// comes from --stub, then --backend, then the config file, then
// FLIPDA_BACKEND_URL, then the in-process stubs.
RunConfig ResolveConfig(const Overrides& overrides, RunConfig config);

// Builds the effective configuration from flags; reads --config if given.
RunConfig BuildRunConfig(const Overrides& overrides);

struct SearchSpace {
  std::vector<double> mask_ratios;
  std::vector<FillStrategy> fills;
};

// The documented per-task search space. Throws ConfigError for unknown
// tasks.
SearchSpace TaskSearchSpace(const std::string& task_id);

// Throws ConfigError when a value falls outside the search space, unless
// the config allows unsafe parameters.
void ValidateRunConfig(const RunConfig& config);

// The grid a sweep runs: the config's grid, with missing axes taken from the
// task's search space (all decodes; the configured agreement mode).
SweepGrid EffectiveSweepGrid(const RunConfig& config);

// "mr0.3_greedy_default_agree".
std::string SweepRunName(double mask_ratio, DecodeStrategy decode,
                         const FillStrategy& fill, AgreementMode agreement);

}  // namespace flipda::cli

#endif  // FLIPDA_TOOLS_CLI_CONFIG_H_
