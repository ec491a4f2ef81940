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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "flipda/cloze.h"
#include "flipda/error.h"

namespace flipda {

namespace {

using SKind = SelectError::Kind;

std::size_t LabelIndex(const TaskSpec& task, const std::string& label) {
  return task.label_set.IndexOf(label).value_or(task.label_set.size());
}

bool ProbThenOrder(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.p_max != b.p_max) return a.p_max > b.p_max;
  if (a.source_index != b.source_index) return a.source_index < b.source_index;
  return a.candidate_index < b.candidate_index;
}

Selection Select1(const ScoredCandidate& s) {
  return Selection{s.candidate,    s.argmax_label, s.p_max,
                   s.source_label, s.source_index, s.candidate_index};
}

SelectionResult Finish(const TaskSpec& task, std::vector<Selection> selected,
                       std::size_t skipped) {
  std::sort(
      selected.begin(), selected.end(),
      [&task](const Selection& a, const Selection& b) {
        const auto ka = std::make_tuple(LabelIndex(task, a.source_label),
                                        LabelIndex(task, a.assigned_label),
                                        a.source_index, a.candidate_index);
        const auto kb = std::make_tuple(LabelIndex(task, b.source_label),
                                        LabelIndex(task, b.assigned_label),
                                        b.source_index, b.candidate_index);
        return ka < kb;
      });
  SelectionResult result;
  result.skipped_empty_sets = skipped;
  for (const auto& s : selected) {
    ++result.per_direction_counts[{s.source_label, s.assigned_label}];
  }
  result.selected = std::move(selected);
  return result;
}

std::map<Direction, std::vector<const ScoredCandidate*>> EligiblePools(
    const std::vector<ScoredCandidate>& scored, const TaskSpec& task,
    const SelectionConfig& cfg) {
  std::map<Direction, std::vector<const ScoredCandidate*>> pools;
  for (const auto& s : scored) {
    if (IsEligible(s, task, cfg)) pools[s.direction()].push_back(&s);
  }
  return pools;
}

}  // namespace

std::string Direction::Name() const { return from + "->" + to; }

Direction Direction::Parse(std::string_view text) {
  const auto arrow = text.find("->");
  if (arrow == std::string_view::npos || arrow == 0 ||
      arrow + 2 >= text.size()) {
    throw std::invalid_argument("expected FROM->TO, got " + std::string(text));
  }
  return {std::string(text.substr(0, arrow)),
          std::string(text.substr(arrow + 2))};
}

std::vector<Direction> AllDirections(const TaskSpec& task) {
  std::vector<Direction> out;
  for (const auto& from : task.label_set.labels()) {
    for (const auto& to : task.label_set.labels()) {
      if (task.AllowsTarget(from, to)) out.push_back({from, to});
    }
  }
  return out;
}

std::size_t ArgMax(const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("empty probability vector");
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) -
                                  probs.begin());
}

std::vector<ScoredCandidate> ScoreCandidates(
    const std::vector<CandidateRecord>& candidates, const TaskSpec& task,
    const Dataset& dataset, ClassifierBackend& classifier,
    const ScoreOptions& options) {
  if (options.batch_size < 1) throw std::invalid_argument("batch_size < 1");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dataset.size(); ++i) index[dataset[i].id] = i;

  std::vector<ScoredCandidate> pending;
  std::vector<std::string> inputs;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& record = candidates[c];
    auto it = index.find(record.source_id);
    if (it == index.end()) {
      throw SelectError(SKind::kUnknownSource,
                        "unknown source " + record.source_id);
    }
    if (options.drop_inconsistent && !record.consistency_ok) continue;
    const Example& source = dataset[it->second];
    ScoredCandidate s;
    s.candidate = record;
    s.source_label = source.label;
    s.source_index = it->second;
    s.candidate_index = c;
    inputs.push_back(RenderClassifierInput(
        task, record.fields, source.choices ? &*source.choices : nullptr));
    pending.push_back(std::move(s));
  }

  const auto& labels = task.label_set.labels();
  for (std::size_t start = 0; start < pending.size();
       start += options.batch_size) {
    const std::size_t end =
        std::min(pending.size(), start + options.batch_size);
    ClassifyRequest request{
        task.task_id, {inputs.begin() + start, inputs.begin() + end}, labels};
    ClassifyResponse response;
    try {
      response = classifier.Classify(request);
    } catch (const BackendError& e) {
      throw BackendError(e.kind(),
                         "batch " + std::to_string(start / options.batch_size) +
                             ": " + e.what());
    }
    for (std::size_t i = start; i < end; ++i) {
      auto& s = pending[i];
      s.probs = std::move(response.probs[i - start]);
      const std::size_t best = ArgMax(s.probs);
      s.argmax_label = labels[best];
      s.p_max = s.probs[best];
    }
  }
  return pending;
}

const char* StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kDefault:
      return "default";
    case Strategy::kGlobalTopK:
      return "global_topk";
    case Strategy::kGlobalTopP:
      return "global_topp";
    case Strategy::kDiverseTopK:
      return "diverse_topk";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kDefault, Strategy::kGlobalTopK,
                     Strategy::kGlobalTopP, Strategy::kDiverseTopK}) {
    if (name == StrategyName(s)) return s;
  }
  throw SelectError(SKind::kInvalidConfig,
                    "unknown strategy " + std::string(name));
}

void SelectionConfig::Validate(bool allow_any) const {
  auto fail = [](const std::string& msg) {
    throw SelectError(SKind::kInvalidConfig, msg);
  };
  const bool needs_k =
      strategy == Strategy::kGlobalTopK || strategy == Strategy::kDiverseTopK;
  if (needs_k && !k && !rate_percent) fail("top-K strategies need k or rate");
  if (rate_percent) {
    if (*rate_percent < 0 || *rate_percent > 100) fail("rate out of [0, 100]");
    if (!allow_any && *rate_percent != 10 && *rate_percent != 20) {
      fail("rate must be 10 or 20 percent");
    }
  }
  if (strategy == Strategy::kGlobalTopP) {
    if (!(p_threshold >= 0.0 && p_threshold <= 1.0)) fail("P out of [0, 1]");
    if (!allow_any && std::fabs(p_threshold - 0.9) > 1e-9 &&
        std::fabs(p_threshold - 0.95) > 1e-9) {
      fail("P must be 0.9 or 0.95");
    }
  }
  if (!include_preserved && !include_flipped) {
    fail("nothing to select: preserved and flipped both excluded");
  }
}

std::size_t SelectionConfig::BudgetFor(std::size_t pool_size) const {
  if (k) return std::min(*k, pool_size);
  if (rate_percent) {
    const auto pct = static_cast<std::size_t>(*rate_percent);
    return std::min(pool_size, (pct * pool_size + 99) / 100);
  }
  return pool_size;
}

bool IsEligible(const ScoredCandidate& scored, const TaskSpec& task,
                const SelectionConfig& cfg) {
  if (cfg.require_label_agreement &&
      scored.argmax_label != scored.candidate.intended_label) {
    return false;
  }
  const Direction d = scored.direction();
  if (d.Flipped() ? !cfg.include_flipped : !cfg.include_preserved) return false;
  if (!task.AllowsTarget(d.from, d.to)) return false;
  return !cfg.directions || cfg.directions->count(d) > 0;
}

std::vector<ScoredCandidate> FilterDirections(
    const std::vector<ScoredCandidate>& scored,
    const std::set<Direction>& directions) {
  std::vector<ScoredCandidate> out;
  for (const auto& s : scored) {
    if (directions.count(s.direction())) out.push_back(s);
  }
  return out;
}

SelectionResult SelectDefault(const std::vector<ScoredCandidate>& scored,
                              const TaskSpec& task, const Dataset& dataset,
                              const SelectionConfig& cfg) {
  // best[source][target] is the winning candidate of S_{source,target}.
  std::vector<std::map<std::string, const ScoredCandidate*>> best(
      dataset.size());
  for (const auto& s : scored) {
    if (s.source_index >= dataset.size()) {
      throw SelectError(SKind::kUnknownSource, s.candidate.source_id);
    }
    if (!IsEligible(s, task, cfg)) continue;
    auto& slot = best[s.source_index][s.argmax_label];
    if (slot == nullptr || ProbThenOrder(s, *slot)) slot = &s;
  }

  std::vector<Selection> selected;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const std::string& from = dataset[i].label;
    for (const auto& to : task.label_set.labels()) {
      const Direction d{from, to};
      if (d.Flipped() ? !cfg.include_flipped : !cfg.include_preserved) continue;
      if (!task.AllowsTarget(from, to)) continue;
      if (cfg.directions && !cfg.directions->count(d)) continue;
      auto it = best[i].find(to);
      if (it == best[i].end()) {
        ++skipped;
      } else {
        selected.push_back(Select1(*it->second));
      }
    }
  }
  return Finish(task, std::move(selected), skipped);
}

SelectionResult SelectGlobalTopK(const std::vector<ScoredCandidate>& scored,
                                 const TaskSpec& task,
                                 const SelectionConfig& cfg) {
  std::vector<Selection> selected;
  for (auto& [direction, pool] : EligiblePools(scored, task, cfg)) {
    std::sort(pool.begin(), pool.end(), [](const auto* a, const auto* b) {
      return ProbThenOrder(*a, *b);
    });
    const std::size_t budget = cfg.BudgetFor(pool.size());
    for (std::size_t i = 0; i < budget; ++i)
      selected.push_back(Select1(*pool[i]));
  }
  return Finish(task, std::move(selected), 0);
}

SelectionResult SelectGlobalTopP(const std::vector<ScoredCandidate>& scored,
                                 const TaskSpec& task,
                                 const SelectionConfig& cfg) {
  std::vector<Selection> selected;
  for (const auto& s : scored) {
    if (IsEligible(s, task, cfg) && s.p_max >= cfg.p_threshold) {
      selected.push_back(Select1(s));
    }
  }
  return Finish(task, std::move(selected), 0);
}

SelectionResult SelectDiverseTopK(const std::vector<ScoredCandidate>& scored,
                                  const TaskSpec& task,
                                  const SelectionConfig& cfg) {
  std::vector<Selection> selected;
  for (auto& [direction, pool] : EligiblePools(scored, task, cfg)) {
    std::map<std::size_t, std::vector<const ScoredCandidate*>> by_source;
    for (const auto* s : pool) by_source[s->source_index].push_back(s);
    std::size_t deepest = 0;
    for (auto& [source, ranked] : by_source) {
      std::sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
        return ProbThenOrder(*a, *b);
      });
      deepest = std::max(deepest, ranked.size());
    }
    std::size_t budget = cfg.BudgetFor(pool.size());
    for (std::size_t rank = 0; rank < deepest && budget > 0; ++rank) {
      for (auto& [source, ranked] : by_source) {
        if (budget == 0) break;
        if (rank >= ranked.size()) continue;
        selected.push_back(Select1(*ranked[rank]));
        --budget;
      }
    }
  }
  return Finish(task, std::move(selected), 0);
}

SelectionResult Select(const std::vector<ScoredCandidate>& scored,
                       const TaskSpec& task, const Dataset& dataset,
                       const SelectionConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::kDefault:
      return SelectDefault(scored, task, dataset, cfg);
    case Strategy::kGlobalTopK:
      return SelectGlobalTopK(scored, task, cfg);
    case Strategy::kGlobalTopP:
      return SelectGlobalTopP(scored, task, cfg);
    case Strategy::kDiverseTopK:
      return SelectDiverseTopK(scored, task, cfg);
  }
  throw std::logic_error("unhandled strategy");
}

Example CandidateToExample(const CandidateRecord& candidate,
                           const Example& source, std::string label,
                           std::string id) {
  Example ex;
  ex.id = std::move(id);
  ex.fields = candidate.fields;
  ex.label = std::move(label);
  ex.choices = source.choices;
  ex.entities = source.entities;
  ex.answers = candidate.answers;
  return ex;
}

Dataset AssembleTrainingSet(const Dataset& original,
                            const SelectionResult& result) {
  Dataset out = original;
  std::map<std::string, std::size_t> per_source;
  for (const auto& s : result.selected) {
    const Example& source = original.at(s.source_index);
    const std::size_t n = per_source[source.id]++;
    out.push_back(
        CandidateToExample(s.candidate, source, s.assigned_label,
                           source.id + "#flipda" + std::to_string(n)));
  }
  return out;
}

Dataset AssembleBaselineSet(const Dataset& original, const Dataset& augmented,
                            std::size_t copies) {
  Dataset out;
  out.reserve(original.size() * copies + augmented.size());
  for (std::size_t c = 0; c < copies; ++c) {
    for (const auto& ex : original) {
      out.push_back(ex);
      if (c > 0) out.back().id += "#" + std::to_string(c);
    }
  }
  out.insert(out.end(), augmented.begin(), augmented.end());
  return out;
}

bool ResolveLabelAgreement(const std::vector<CandidateRecord>& records,
                           double min_rate, std::size_t slice) {
  const std::size_t n = std::min(slice, records.size());
  if (n == 0) return true;
  std::size_t passed = 0;
  for (std::size_t i = 0; i < n; ++i) passed += records[i].consistency_ok;
  return static_cast<double>(passed) >= min_rate * static_cast<double>(n);
}

}  // namespace flipda
