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

#include "flipda/evalkit.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "flipda/error.h"

namespace flipda {

namespace {

using EKind = EvalError::Kind;

template <typename A, typename B>
void RequireAligned(const A& a, const B& b) {
  if (a.size() != b.size()) {
    throw EvalError(EKind::kLengthMismatch,
                    "lengths differ: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
  if (a.empty()) throw EvalError(EKind::kEmpty, "no items");
}

double F1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 100.0 * 2.0 * tp / denom;
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

double Accuracy(const std::vector<std::string>& preds,
                const std::vector<std::string>& golds) {
  RequireAligned(preds, golds);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    correct += preds[i] == golds[i];
  return 100.0 * correct / preds.size();
}

double MacroF1(const std::vector<std::string>& preds,
               const std::vector<std::string>& golds,
               const std::vector<std::string>& labels) {
  RequireAligned(preds, golds);
  if (labels.size() < 2) {
    throw EvalError(EKind::kInvalidArgument, "macro F1 needs >= 2 labels");
  }
  double sum = 0.0;
  for (const auto& label : labels) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const bool p = preds[i] == label;
      const bool g = golds[i] == label;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    sum += F1(tp, fp, fn);
  }
  return sum / labels.size();
}

double BinaryF1(const std::vector<std::string>& preds,
                const std::vector<std::string>& golds,
                const std::string& positive) {
  RequireAligned(preds, golds);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] == positive;
    const bool g = golds[i] == positive;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  return F1(tp, fp, fn);
}

double ExactMatchGrouped(const std::vector<std::string>& preds,
                         const std::vector<std::string>& golds,
                         const std::vector<std::string>& groups) {
  RequireAligned(preds, golds);
  RequireAligned(preds, groups);
  std::map<std::string, bool> all_correct;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    auto [it, inserted] = all_correct.try_emplace(groups[i], true);
    it->second = it->second && preds[i] == golds[i];
  }
  std::size_t full = 0;
  for (const auto& [group, ok] : all_correct) full += ok;
  return 100.0 * full / all_correct.size();
}

std::string NormalizeAnswer(const std::string& text) {
  std::string cleaned;
  for (unsigned char c : text) {
    if (std::ispunct(c)) continue;
    cleaned += static_cast<char>(std::tolower(c));
  }
  std::string out;
  for (const auto& w : SplitWords(cleaned)) {
    if (w == "a" || w == "an" || w == "the") continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

double TokenF1(const std::string& pred, const std::string& gold) {
  const auto p = SplitWords(NormalizeAnswer(pred));
  const auto g = SplitWords(NormalizeAnswer(gold));
  if (p.empty() || g.empty()) return p == g ? 100.0 : 0.0;
  std::map<std::string, int> counts;
  for (const auto& w : g) ++counts[w];
  std::size_t common = 0;
  for (const auto& w : p) {
    if (counts[w] > 0) {
      --counts[w];
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / p.size();
  const double recall = static_cast<double>(common) / g.size();
  return 100.0 * 2.0 * precision * recall / (precision + recall);
}

double AnswerAccuracy(const std::vector<std::string>& preds,
                      const std::vector<std::vector<std::string>>& answers) {
  RequireAligned(preds, answers);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::string p = NormalizeAnswer(preds[i]);
    hits += std::any_of(answers[i].begin(), answers[i].end(),
                        [&](const auto& a) { return NormalizeAnswer(a) == p; });
  }
  return 100.0 * hits / preds.size();
}

double AnswerTokenF1(const std::vector<std::string>& preds,
                     const std::vector<std::vector<std::string>>& answers) {
  RequireAligned(preds, answers);
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    double best = 0.0;
    for (const auto& a : answers[i])
      best = std::max(best, TokenF1(preds[i], a));
    sum += best;
  }
  return sum / preds.size();
}

double CompositeScore(const std::map<std::string, double>& metrics) {
  if (metrics.empty()) throw EvalError(EKind::kEmpty, "no metric values");
  double sum = 0.0;
  for (const auto& [id, value] : metrics) sum += value;
  return sum / metrics.size();
}

double TaskScore::Composite() const { return CompositeScore(metrics); }

double AvgScore(const std::vector<TaskScore>& scores) {
  if (scores.empty()) throw EvalError(EKind::kEmpty, "no task scores");
  double sum = 0.0;
  for (const auto& s : scores) sum += s.Composite();
  return sum / scores.size();
}

double MaxDrop(const std::vector<TaskScore>& baseline,
               const std::vector<TaskScore>& method) {
  std::map<std::string, double> base;
  for (const auto& s : baseline) base[s.task_id] = s.Composite();
  std::set<std::string> seen;
  double drop = 0.0;
  for (const auto& s : method) {
    auto it = base.find(s.task_id);
    if (it == base.end() || !seen.insert(s.task_id).second) {
      throw EvalError(EKind::kTaskMismatch, "unexpected task " + s.task_id);
    }
    drop = std::max(drop, it->second - s.Composite());
  }
  if (seen.size() != base.size()) {
    throw EvalError(EKind::kTaskMismatch, "method is missing tasks");
  }
  return drop;
}

TaskScore ScoreTask(const TaskSpec& task, const Dataset& gold,
                    const std::map<std::string, std::string>& predictions) {
  if (gold.empty()) throw EvalError(EKind::kEmpty, "no gold examples");
  std::vector<std::string> preds, golds, groups;
  std::vector<std::vector<std::string>> answers;
  for (const auto& ex : gold) {
    auto it = predictions.find(ex.id);
    if (it == predictions.end()) {
      throw EvalError(EKind::kLengthMismatch, "no prediction for " + ex.id);
    }
    preds.push_back(it->second);
    golds.push_back(ex.label);
    answers.push_back(ex.answers.value_or(std::vector<std::string>{}));
    auto field = [&ex](const char* name) {
      auto f = ex.fields.find(name);
      return f == ex.fields.end() ? std::string() : f->second;
    };
    groups.push_back(field("passage") + '\x1f' + field("question"));
  }

  TaskScore score;
  score.task_id = task.task_id;
  for (const auto& metric : task.metrics) {
    double value = 0.0;
    if (task.uses_entities) {
      value = metric == "acc" ? AnswerAccuracy(preds, answers)
                              : AnswerTokenF1(preds, answers);
    } else if (metric == "acc") {
      value = Accuracy(preds, golds);
    } else if (metric == "f1") {
      value = MacroF1(preds, golds, task.label_set.labels());
    } else if (metric == "f1a") {
      value = BinaryF1(preds, golds, task.label_set.labels().front());
    } else if (metric == "em") {
      value = ExactMatchGrouped(preds, golds, groups);
    } else {
      throw EvalError(EKind::kInvalidArgument, "unknown metric " + metric);
    }
    score.metrics[metric] = value;
  }
  return score;
}

}  // namespace flipda
