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

#include "config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "flipda/error.h"
#include "json.hpp"

namespace flipda::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

void CheckKeys(const json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&key](const char* a) { return key == a; })) {
      throw ConfigError("unknown config key " + where + "." + key);
    }
  }
}

template <typename T>
void Read(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + where + "." + key);
  }
}

template <typename T>
void ReadOptional(const json& obj, const char* key, const std::string& where,
                  std::optional<T>& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  T value{};
  Read(obj, key, where, value);
  out = value;
}

void ReadPath(const json& obj, const char* key, const std::string& where,
              const fs::path& base, std::optional<fs::path>& out) {
  std::optional<std::string> raw;
  ReadOptional(obj, key, where, raw);
  if (raw) out = base / *raw;
}

AgreementMode ParseAgreement(const json& value) {
  if (value.is_boolean()) {
    return value.get<bool>() ? AgreementMode::kOn : AgreementMode::kOff;
  }
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "auto") return AgreementMode::kAuto;
    if (s == "agree" || s == "on") return AgreementMode::kOn;
    if (s == "free" || s == "off") return AgreementMode::kOff;
  }
  throw ConfigError(
      "agreement must be true, false, \"auto\", \"agree\" or "
      "\"free\"");
}

template <typename Fn>
auto Wrap(Fn fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

bool Near(double a, double b) { return std::fabs(a - b) < 1e-9; }

}  // namespace

const char* AgreementModeName(AgreementMode mode) {
  switch (mode) {
    case AgreementMode::kAuto:
      return "auto";
    case AgreementMode::kOn:
      return "agree";
    case AgreementMode::kOff:
      return "free";
  }
  return "auto";
}

const std::vector<std::string>& BaselineMethods() {
  static const std::vector<std::string> methods = {
      "sr", "knn", "eda", "bt10", "bt6", "tbert", "t5mlm"};
  return methods;
}

bool IsBaselineMethod(const std::string& method) {
  const auto& m = BaselineMethods();
  return std::find(m.begin(), m.end(), method) != m.end();
}

RunConfig ParseConfig(const std::string& json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  CheckKeys(doc, "config",
            {"task", "train", "output_dir", "gold", "method", "seed", "fill",
             "targets", "selection", "backend", "stub", "lexicon", "baseline",
             "sweep", "report"});

  RunConfig c;
  Read(doc, "task", "config", c.task_id);
  std::optional<fs::path> path;
  ReadPath(doc, "train", "config", base_dir, path);
  if (path) c.train = *path;
  path.reset();
  ReadPath(doc, "output_dir", "config", base_dir, path);
  if (path) c.output_dir = *path;
  if (auto it = doc.find("gold"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("gold must map task to path");
    for (const auto& [task, p] : it->items()) {
      if (!p.is_string()) throw ConfigError("gold." + task + " must be a path");
      c.gold[task] = base_dir / p.get<std::string>();
    }
  }
  Read(doc, "method", "config", c.method);
  Read(doc, "seed", "config", c.seed);
  ReadOptional(doc, "targets", "config", c.targets);

  if (auto it = doc.find("fill"); it != doc.end()) {
    CheckKeys(*it, "fill",
              {"mask_ratio", "decode", "fill_strategy", "n_candidates"});
    Read(*it, "mask_ratio", "fill", c.fill.mask_ratio);
    Read(*it, "n_candidates", "fill", c.fill.n_candidates);
    std::optional<std::string> s;
    ReadOptional(*it, "decode", "fill", s);
    if (s) c.fill.decode = Wrap([&] { return ParseDecodeName(*s); });
    s.reset();
    ReadOptional(*it, "fill_strategy", "fill", s);
    if (s) c.fill.fill_strategy = Wrap([&] { return FillStrategy::Parse(*s); });
  }

  if (auto it = doc.find("selection"); it != doc.end()) {
    const json& sel = *it;
    CheckKeys(sel, "selection",
              {"strategy", "k", "rate", "p_threshold", "directions",
               "require_label_agreement", "include_preserved",
               "include_flipped", "drop_inconsistent", "batch_size"});
    std::optional<std::string> strategy;
    ReadOptional(sel, "strategy", "selection", strategy);
    if (strategy) {
      try {
        c.selection.strategy = ParseStrategy(*strategy);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }
    ReadOptional(sel, "k", "selection", c.selection.k);
    ReadOptional(sel, "rate", "selection", c.selection.rate_percent);
    Read(sel, "p_threshold", "selection", c.selection.p_threshold);
    std::optional<std::vector<std::string>> directions;
    ReadOptional(sel, "directions", "selection", directions);
    if (directions) {
      std::set<Direction> set;
      for (const auto& d : *directions) {
        set.insert(Wrap([&] { return Direction::Parse(d); }));
      }
      c.selection.directions = std::move(set);
    }
    if (auto a = sel.find("require_label_agreement"); a != sel.end()) {
      c.agreement = ParseAgreement(*a);
    }
    Read(sel, "include_preserved", "selection", c.selection.include_preserved);
    Read(sel, "include_flipped", "selection", c.selection.include_flipped);
    Read(sel, "drop_inconsistent", "selection", c.drop_inconsistent);
    Read(sel, "batch_size", "selection", c.batch_size);
  }

  if (auto it = doc.find("backend"); it != doc.end()) {
    CheckKeys(
        *it, "backend",
        {"endpoint", "timeout_ms", "max_parallel", "retries", "backoff_ms"});
    Read(*it, "endpoint", "backend", c.backend.endpoint);
    c.backend_endpoint_set = it->contains("endpoint");
    std::int64_t ms = c.backend.timeout.count();
    Read(*it, "timeout_ms", "backend", ms);
    c.backend.timeout = std::chrono::milliseconds(ms);
    ms = c.backend.backoff_base.count();
    Read(*it, "backoff_ms", "backend", ms);
    c.backend.backoff_base = std::chrono::milliseconds(ms);
    Read(*it, "max_parallel", "backend", c.backend.max_parallel);
    Read(*it, "retries", "backend", c.backend.retries);
  }

  if (auto it = doc.find("stub"); it != doc.end()) {
    CheckKeys(*it, "stub",
              {"infill_lexicon", "infill_seed", "classifier_weights"});
    ReadPath(*it, "infill_lexicon", "stub", base_dir, c.stub.infill_lexicon);
    Read(*it, "infill_seed", "stub", c.stub.infill_seed);
    ReadPath(*it, "classifier_weights", "stub", base_dir,
             c.stub.classifier_weights);
  }

  if (auto it = doc.find("lexicon"); it != doc.end()) {
    CheckKeys(*it, "lexicon", {"synonyms", "embeddings", "stopwords"});
    ReadPath(*it, "synonyms", "lexicon", base_dir, c.lexicon.synonyms);
    ReadPath(*it, "embeddings", "lexicon", base_dir, c.lexicon.embeddings);
    ReadPath(*it, "stopwords", "lexicon", base_dir, c.lexicon.stopwords);
  }

  if (auto it = doc.find("baseline"); it != doc.end()) {
    auto& b = c.baseline;
    CheckKeys(*it, "baseline",
              {"ratio", "knn_k", "n_aug", "copies", "eda_alpha", "eda_n_aug",
               "eda_lowercase", "tbert_p", "t5_mask_ratio", "max_tokens"});
    Read(*it, "ratio", "baseline", b.ratio);
    Read(*it, "knn_k", "baseline", b.knn_k);
    Read(*it, "n_aug", "baseline", b.n_aug);
    Read(*it, "copies", "baseline", b.copies);
    Read(*it, "eda_alpha", "baseline", b.eda_alpha);
    Read(*it, "eda_n_aug", "baseline", b.eda_n_aug);
    Read(*it, "eda_lowercase", "baseline", b.eda_lowercase);
    Read(*it, "tbert_p", "baseline", b.tbert_p);
    Read(*it, "t5_mask_ratio", "baseline", b.t5_mask_ratio);
    Read(*it, "max_tokens", "baseline", b.max_tokens);
  }

  if (auto it = doc.find("sweep"); it != doc.end()) {
    CheckKeys(*it, "sweep",
              {"mask_ratio", "decode", "fill_strategy", "agreement"});
    SweepGrid grid;
    Read(*it, "mask_ratio", "sweep", grid.mask_ratios);
    std::vector<std::string> names;
    Read(*it, "decode", "sweep", names);
    for (const auto& n : names) {
      grid.decodes.push_back(Wrap([&] { return ParseDecodeName(n); }));
    }
    names.clear();
    Read(*it, "fill_strategy", "sweep", names);
    for (const auto& n : names) {
      grid.fills.push_back(Wrap([&] { return FillStrategy::Parse(n); }));
    }
    if (auto a = it->find("agreement"); a != it->end()) {
      if (!a->is_array()) throw ConfigError("sweep.agreement must be a list");
      for (const auto& v : *a) grid.agreement.push_back(ParseAgreement(v));
    }
    c.sweep = std::move(grid);
  }

  if (auto it = doc.find("report"); it != doc.end()) {
    CheckKeys(*it, "report", {"baseline_method"});
    Read(*it, "baseline_method", "report", c.baseline_method);
  }
  return c;
}

RunConfig LoadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), path.parent_path());
}

RunConfig ResolveConfig(const Overrides& overrides, RunConfig config) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (overrides.unsafe_params) config.unsafe_params = true;

  if (overrides.stub) {
    config.backend.endpoint = "stub";
  } else if (overrides.backend) {
    config.backend.endpoint = *overrides.backend;
  } else if (!config.backend_endpoint_set) {
    const char* env = std::getenv(kBackendEnvVar);
    if (env != nullptr && *env != '\0') config.backend.endpoint = env;
  }
  try {
    config.backend.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

RunConfig BuildRunConfig(const Overrides& overrides) {
  RunConfig config;
  if (overrides.config) config = LoadConfig(*overrides.config);
  return ResolveConfig(overrides, std::move(config));
}

SearchSpace TaskSearchSpace(const std::string& task_id) {
  const FillStrategy def{};
  const FillStrategy iter1{1};
  const FillStrategy iter10{10};
  static const std::map<std::string, SearchSpace> table = {
      {"boolq", {{0.3, 0.5}, {def}}},
      {"cb", {{0.5}, {def}}},
      {"copa", {{0.8}, {def, iter1}}},
      {"rte", {{0.5}, {def}}},
      {"wic", {{0.8}, {def}}},
      {"wsc", {{0.3}, {def}}},
      {"multirc", {{0.3, 0.5}, {iter10}}},
      {"record", {{0.3}, {iter10}}},
  };
  auto it = table.find(task_id);
  if (it == table.end()) throw ConfigError("unknown task " + task_id);
  return it->second;
}

void ValidateRunConfig(const RunConfig& config) {
  if (config.task_id.empty()) throw ConfigError("no task configured");
  const SearchSpace space = TaskSearchSpace(config.task_id);
  if (config.method != "flipda" && !IsBaselineMethod(config.method)) {
    throw ConfigError("unknown method " + config.method);
  }
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  try {
    config.fill.Validate(/*allow_any_ratio=*/config.unsafe_params);
    config.selection.Validate(/*allow_any=*/config.unsafe_params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const SelectError& e) {
    throw ConfigError(e.what());
  }
  if (config.unsafe_params || config.method != "flipda") return;

  auto ratio_ok = [&space](double r) {
    return std::any_of(space.mask_ratios.begin(), space.mask_ratios.end(),
                       [r](double a) { return Near(a, r); });
  };
  auto fill_ok = [&space](const FillStrategy& f) {
    return std::find(space.fills.begin(), space.fills.end(), f) !=
           space.fills.end();
  };
  if (!ratio_ok(config.fill.mask_ratio)) {
    throw ConfigError("mask ratio outside the " + config.task_id +
                      " search space (use --unsafe-params)");
  }
  if (!fill_ok(config.fill.fill_strategy)) {
    throw ConfigError("fill strategy " + config.fill.fill_strategy.Name() +
                      " outside the " + config.task_id +
                      " search space (use --unsafe-params)");
  }
  if (config.sweep) {
    for (double r : config.sweep->mask_ratios) {
      if (!ratio_ok(r)) throw ConfigError("sweep mask ratio out of space");
    }
    for (const auto& f : config.sweep->fills) {
      if (!fill_ok(f)) throw ConfigError("sweep fill strategy out of space");
    }
  }
}

SweepGrid EffectiveSweepGrid(const RunConfig& config) {
  SweepGrid grid = config.sweep.value_or(SweepGrid{});
  const SearchSpace space = TaskSearchSpace(config.task_id);
  if (grid.mask_ratios.empty()) grid.mask_ratios = space.mask_ratios;
  if (grid.decodes.empty()) {
    grid.decodes = {DecodeStrategy::kGreedy, DecodeStrategy::kSample,
                    DecodeStrategy::kBeam};
  }
  if (grid.fills.empty()) grid.fills = space.fills;
  if (grid.agreement.empty()) grid.agreement = {config.agreement};
  return grid;
}

std::string SweepRunName(double mask_ratio, DecodeStrategy decode,
                         const FillStrategy& fill, AgreementMode agreement) {
  char ratio[32];
  std::snprintf(ratio, sizeof(ratio), "%g", mask_ratio);
  return std::string("mr") + ratio + "_" + DecodeStrategyName(decode) + "_" +
         fill.Name() + "_" + AgreementModeName(agreement);
}

}  // namespace flipda::cli
