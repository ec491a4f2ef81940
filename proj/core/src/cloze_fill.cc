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

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "flipda/cloze.h"
#include "flipda/error.h"

namespace flipda {

std::string FillStrategy::Name() const {
  return IsDefault() ? "default" : "rand_iter_" + std::to_string(k);
}

FillStrategy FillStrategy::Parse(std::string_view name) {
  if (name == "default") return FillStrategy{};
  constexpr std::string_view kPrefix = "rand_iter_";
  if (name.substr(0, kPrefix.size()) == kPrefix) {
    const std::string digits(name.substr(kPrefix.size()));
    if (!digits.empty() && digits.size() < 10 &&
        std::all_of(digits.begin(), digits.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      const std::size_t k = std::stoul(digits);
      if (k >= 1) return FillStrategy{k};
    }
  }
  throw std::invalid_argument("unknown fill strategy: " + std::string(name));
}

DecodeStrategy ParseDecodeName(std::string_view name) {
  if (name == "greedy") return DecodeStrategy::kGreedy;
  if (name == "sample" || name == "sample_top15")
    return DecodeStrategy::kSample;
  if (name == "beam" || name == "beam10") return DecodeStrategy::kBeam;
  throw std::invalid_argument("unknown decode strategy: " + std::string(name));
}

std::string FillConfig::DecodeName() const {
  switch (decode) {
    case DecodeStrategy::kGreedy:
      return "greedy";
    case DecodeStrategy::kSample:
      return "sample_top15";
    case DecodeStrategy::kBeam:
      return "beam10";
  }
  return "greedy";
}

DecodeParams FillConfig::Decode(std::uint64_t seed) const {
  DecodeParams params;
  params.strategy = decode;
  params.seed = seed;
  return params;
}

void FillConfig::Validate(bool allow_any_ratio) const {
  if (n_candidates < 1)
    throw std::invalid_argument("n_candidates must be >= 1");
  if (!(mask_ratio > 0.0 && mask_ratio <= 1.0)) {
    throw std::invalid_argument("mask ratio must be in (0, 1]");
  }
  if (allow_any_ratio) return;
  for (double listed : {0.3, 0.5, 0.8}) {
    if (std::fabs(mask_ratio - listed) < 1e-9) return;
  }
  throw std::invalid_argument("mask ratio must be one of 0.3, 0.5, 0.8");
}

std::map<std::string, std::string> ExtractFields(
    const ClozeInstance& instance,
    const std::map<std::size_t, std::string>& fills) {
  std::map<std::string, std::vector<std::string>> parts;
  std::size_t flat = 0;
  for (const auto& seq : instance.sequences) {
    for (const auto& span : seq.spans) {
      std::string text;
      for (const auto& t : span.tokens) {
        auto it = fills.find(flat++);
        text += it != fills.end() ? it->second : t.surface;
      }
      if (span.kind == SpanKind::kField) {
        parts[span.field].push_back(std::move(text));
      }
    }
  }
  std::map<std::string, std::string> out = instance.carried_fields;
  for (auto& [name, pieces] : parts) {
    const bool placeholder = instance.substituted_answer.has_value() &&
                             name == instance.placeholder_field;
    std::string joined;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i > 0 && placeholder) joined += instance.placeholder_token;
      joined += pieces[i];
    }
    out[name] = std::move(joined);
  }
  return out;
}

namespace {

CandidateRecord MakeRecord(const ClozeInstance& instance, const MaskPlan& plan,
                           const FillConfig& cfg, std::uint64_t seed,
                           const std::map<std::size_t, std::string>& fills) {
  CandidateRecord record;
  record.source_id = instance.source_id;
  record.fields = ExtractFields(instance, fills);
  record.intended_label = instance.target_label;
  record.generation.method = "flipda";
  record.generation.mask_ratio = plan.ratio;
  record.generation.decode = cfg.DecodeName();
  record.generation.fill_strategy = cfg.fill_strategy.Name();
  record.generation.seed = seed;
  if (instance.substituted_answer) {
    record.answers = std::vector<std::string>{*instance.substituted_answer};
  }
  return record;
}

struct SequenceRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<SequenceRange> SequenceRanges(const ClozeInstance& instance) {
  std::vector<SequenceRange> out;
  std::size_t flat = 0;
  for (const auto& seq : instance.sequences) {
    SequenceRange r{flat, flat};
    for (const auto& span : seq.spans) r.end += span.tokens.size();
    flat = r.end;
    out.push_back(r);
  }
  return out;
}

std::string RequestText(const ClozeInstance& instance, SequenceRange range,
                        const std::vector<std::size_t>& selected,
                        const std::map<std::size_t, std::string>& fills) {
  std::string text;
  std::size_t next = 0;
  for (std::size_t flat = range.begin; flat < range.end; ++flat) {
    if (next < selected.size() && selected[next] == flat) {
      text += BlankSentinel(next++);
      continue;
    }
    auto it = fills.find(flat);
    text += it != fills.end() ? it->second : instance.TokenAt(flat).surface;
  }
  return text;
}

// The candidate-level work shared by generation and replay. Returns nullopt
// when the fill dropped the candidate.
std::optional<CandidateRecord> RunCandidate(
    const TaskSpec& task, const Example& example, std::string_view target_label,
    std::uint64_t candidate_seed, const FillConfig& cfg, InfillBackend& backend,
    const Dataset* pool, GenerationResult* log) {
  Rng rng(candidate_seed);
  const ClozeInstance instance =
      RenderCloze(task, example, target_label, rng, pool);
  const MaskPlan plan = PlanMask(instance, cfg.mask_ratio, rng.Next());
  FillConfig single = cfg;
  single.n_candidates = 1;
  FillResult filled = Fill(instance, plan, single, backend, rng.Next());
  if (log != nullptr) {
    for (auto& w : filled.warnings) log->warnings.push_back(std::move(w));
    if (filled.degenerate) ++log->degenerate;
  }
  if (filled.records.empty()) return std::nullopt;
  CandidateRecord record = std::move(filled.records.front());
  record.generation.seed = candidate_seed;
  record.consistency_ok =
      ConsistencyCheck(task, instance, record.fields, backend);
  return record;
}

}  // namespace

FillResult Fill(const ClozeInstance& instance, const MaskPlan& plan,
                const FillConfig& cfg, InfillBackend& backend,
                std::uint64_t seed) {
  if (cfg.n_candidates < 1) {
    throw std::invalid_argument("n_candidates must be >= 1");
  }
  FillResult result;
  if (plan.positions.empty()) {
    result.degenerate = true;
    result.warnings.push_back(instance.source_id +
                              ": nothing to mask, candidates are copies");
    for (std::size_t k = 0; k < cfg.n_candidates; ++k) {
      result.records.push_back(MakeRecord(instance, plan, cfg, seed + k, {}));
    }
    return result;
  }

  const auto ranges = SequenceRanges(instance);
  for (std::size_t k = 0; k < cfg.n_candidates; ++k) {
    const std::uint64_t candidate_seed = seed + k;
    Rng rng(candidate_seed);
    const DecodeParams decode = cfg.Decode(candidate_seed);
    std::map<std::size_t, std::string> fills;
    bool dropped = false;
    for (const auto& range : ranges) {
      std::vector<std::size_t> remaining;
      for (std::size_t p : plan.positions) {
        if (p >= range.begin && p < range.end) remaining.push_back(p);
      }
      while (!remaining.empty() && !dropped) {
        std::vector<std::size_t> selected;
        if (cfg.fill_strategy.IsDefault()) {
          selected = remaining;
        } else {
          const std::size_t take =
              std::min(cfg.fill_strategy.k, remaining.size());
          for (std::size_t i :
               rng.SampleWithoutReplacement(remaining.size(), take)) {
            selected.push_back(remaining[i]);
          }
          std::sort(selected.begin(), selected.end());
        }
        InfillRequest request{RequestText(instance, range, selected, fills),
                              selected.size(), decode};
        ++result.backend_rounds;
        try {
          const InfillResponse response = backend.Infill(request);
          for (std::size_t i = 0; i < selected.size(); ++i) {
            fills[selected[i]] = response.fills[i];
          }
        } catch (const BackendError& e) {
          if (e.kind() != BackendError::Kind::kBlankCountMismatch) throw;
          result.warnings.push_back(instance.source_id + ": candidate " +
                                    std::to_string(k) +
                                    " dropped: " + e.what());
          dropped = true;
        }
        std::set<std::size_t> done(selected.begin(), selected.end());
        std::erase_if(remaining, [&](std::size_t p) { return done.count(p); });
      }
      if (dropped) break;
    }
    if (dropped) continue;
    result.records.push_back(
        MakeRecord(instance, plan, cfg, candidate_seed, fills));
  }
  return result;
}

bool LabelMatches(std::string_view fill, std::string_view label_text) {
  auto normalize = [](std::string_view text) {
    std::string s(StripWhitespace(text));
    while (!s.empty() && std::string_view(".,!?;:").find(s.back()) !=
                             std::string_view::npos) {
      s.pop_back();
      s = std::string(StripWhitespace(s));
    }
    return AsciiLower(s);
  };
  return normalize(fill) == normalize(label_text);
}

bool ConsistencyCheck(const TaskSpec& task, const ClozeInstance& instance,
                      const std::map<std::string, std::string>& fields,
                      InfillBackend& backend) {
  if (!task.JointTemplateFor(instance.target_label).HasLabelSlot()) {
    throw std::invalid_argument(task.task_id + " has no label slot");
  }
  InfillRequest request;
  request.text_with_sentinels = RenderLabelBlank(task, instance, fields);
  request.blank_count = 1;
  const InfillResponse response = backend.Infill(request);
  return LabelMatches(response.fills.front(), instance.label_text);
}

std::uint64_t CandidateSeed(std::uint64_t example_seed,
                            std::string_view target_label, std::size_t index) {
  return SplitSeed(example_seed, target_label, index);
}

GenerationResult GenerateCandidates(const TaskSpec& task,
                                    const Example& example,
                                    const std::vector<std::string>& directions,
                                    const FillConfig& cfg,
                                    InfillBackend& backend,
                                    std::uint64_t example_seed,
                                    const Dataset* training_pool) {
  cfg.Validate(/*allow_any_ratio=*/true);
  for (const auto& target : directions) {
    if (!task.label_set.Contains(target)) {
      throw ClozeError(ClozeError::Kind::kInvalidArgument,
                       "unknown label " + target);
    }
    if (!task.AllowsTarget(example.label, target)) {
      throw ClozeError(
          ClozeError::Kind::kFlipNotAllowed,
          task.task_id + " does not allow " + example.label + " -> " + target);
    }
  }

  GenerationResult result;
  for (const auto& target : task.label_set.labels()) {
    if (std::find(directions.begin(), directions.end(), target) ==
        directions.end()) {
      continue;
    }
    try {
      for (std::size_t j = 0; j < cfg.n_candidates; ++j) {
        auto record = RunCandidate(task, example, target,
                                   CandidateSeed(example_seed, target, j), cfg,
                                   backend, training_pool, &result);
        if (record) result.records.push_back(std::move(*record));
      }
    } catch (const BackendError& e) {
      result.backend_failed = true;
      result.errors.push_back(example.id + " -> " + target + ": " + e.what());
    } catch (const ClozeError& e) {
      result.errors.push_back(example.id + " -> " + target + ": " + e.what());
    }
  }
  return result;
}

CandidateRecord ReplayCandidate(const TaskSpec& task, const Example& example,
                                std::string_view target_label,
                                std::uint64_t candidate_seed,
                                const FillConfig& cfg, InfillBackend& backend,
                                const Dataset* training_pool) {
  auto record = RunCandidate(task, example, target_label, candidate_seed, cfg,
                             backend, training_pool, nullptr);
  if (!record) {
    throw BackendError(BackendError::Kind::kBlankCountMismatch,
                       "replayed candidate was dropped");
  }
  return *record;
}

}  // namespace flipda
