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

#include "cli.h"

#include <exception>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "commands.h"
#include "config.h"
#include "flipda/error.h"
#include "log.h"

namespace flipda::cli {

namespace {

namespace fs = std::filesystem;

std::map<std::string, fs::path> ParseGold(
    const std::vector<std::string>& specs) {
  std::map<std::string, fs::path> out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ConfigError("--gold expects TASK=PATH, got " + spec);
    }
    out[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"FlipDA data augmentation pipeline", "flipda"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string backend;
  std::string output;
  bool stub = false;
  bool unsafe = false;
  app.add_option("--config", config_path, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "Global seed");
  auto* backend_opt =
      app.add_option("--backend", backend, "Model service base URL (http://)");
  auto* output_opt = app.add_option("--output", output, "Output directory");
  app.add_flag("--stub", stub, "Use the in-process stub backends");
  app.add_flag("--unsafe-params", unsafe,
               "Allow values outside the documented search space");

  auto* augment = app.add_subcommand("augment", "Generate candidates");
  auto* select = app.add_subcommand("select", "Score and select candidates");
  std::string cache;
  select->add_option("--cache", cache, "Candidate cache to select from");
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  std::vector<std::string> cells, predictions, gold;
  std::string baseline;
  evaluate->add_option("--cells", cells, "Per-cell score files (JSONL)");
  evaluate->add_option("--predictions", predictions,
                       "Prediction files (JSONL)");
  evaluate->add_option("--gold", gold, "Gold dataset as TASK=PATH");
  evaluate->add_option("--baseline", baseline, "Baseline method name");
  auto* report = app.add_subcommand("report", "Render a report table");
  std::vector<std::string> report_cells;
  report->add_option("--cells", report_cells, "Per-cell score files (JSONL)");
  report->add_option("--baseline", baseline, "Baseline method name");
  auto* sweep = app.add_subcommand("sweep", "Run the parameter grid");

  std::vector<std::string> argv_storage = {"flipda"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  Logger log(err);
  try {
    Overrides overrides;
    if (!config_path.empty()) overrides.config = config_path;
    if (*seed_opt) overrides.seed = seed;
    if (*backend_opt) overrides.backend = backend;
    if (*output_opt) overrides.output_dir = output;
    overrides.stub = stub;
    overrides.unsafe_params = unsafe;
    const RunConfig config = BuildRunConfig(overrides);
    const std::optional<std::string> base =
        baseline.empty() ? std::nullopt : std::optional<std::string>(baseline);

    if (augment->parsed()) return CmdAugment(config, out, log);
    if (select->parsed()) {
      return CmdSelect(
          config, cache.empty() ? std::nullopt : std::optional<fs::path>(cache),
          out, log);
    }
    if (evaluate->parsed()) {
      EvaluateArgs ea;
      ea.cells.assign(cells.begin(), cells.end());
      ea.predictions.assign(predictions.begin(), predictions.end());
      ea.gold = ParseGold(gold);
      ea.baseline = base;
      return CmdEvaluate(config, ea, out, log);
    }
    if (report->parsed()) {
      return CmdReport(config, {report_cells.begin(), report_cells.end()}, base,
                       out, log);
    }
    if (sweep->parsed()) return CmdSweep(config, out, log);
    throw std::logic_error("no subcommand dispatched");
  } catch (const BackendError& e) {
    log.Error("backend", {{"kind", BackendErrorKindName(e.kind())},
                          {"message", e.what()}});
    return kExitBackendError;
  } catch (const Error& e) {
    log.Error("input", {{"message", e.what()}});
    return kExitUserError;
  } catch (const ConfigError& e) {
    log.Error("config", {{"message", e.what()}});
    return kExitUserError;
  } catch (const std::invalid_argument& e) {
    log.Error("config", {{"message", e.what()}});
    return kExitUserError;
  } catch (const fs::filesystem_error& e) {
    log.Error("io", {{"message", e.what()}});
    return kExitUserError;
  } catch (const std::logic_error& e) {
    log.Error("internal", {{"message", e.what()}});
    return kExitInternalError;
  } catch (const std::exception& e) {
    log.Error("failure", {{"message", e.what()}});
    return kExitUserError;
  }
}

}  // namespace flipda::cli
