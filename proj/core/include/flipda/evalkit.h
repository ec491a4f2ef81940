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

// Metrics, per-task composite scores, the average column and MaxDrop.
//
// All metric functions return percentages in [0, 100]. A task's composite
// is the mean of its metric values; a method's average is the mean of its
// composites; MaxDrop is the largest clamped composite drop against the
// baseline method over the shared tasks.

#ifndef FLIPDA_EVALKIT_H_
#define FLIPDA_EVALKIT_H_

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "flipda/corpus.h"
#include "flipda/task.h"

namespace flipda {

// Every metric throws EvalError(kLengthMismatch) for unequal inputs and
// EvalError(kEmpty) for empty ones.
double Accuracy(const std::vector<std::string>& preds,
                const std::vector<std::string>& golds);

// Unweighted mean of per-class F1 over `labels`; a class with no true
// positives, false positives or false negatives scores 0.
double MacroF1(const std::vector<std::string>& preds,
               const std::vector<std::string>& golds,
               const std::vector<std::string>& labels);

// F1 of `positive`; 0 when precision and recall are both undefined.
double BinaryF1(const std::vector<std::string>& preds,
                const std::vector<std::string>& golds,
                const std::string& positive = "true");

// Share of groups whose items are all predicted correctly.
double ExactMatchGrouped(const std::vector<std::string>& preds,
                         const std::vector<std::string>& golds,
                         const std::vector<std::string>& groups);

// Answer normalization: lowercase, punctuation and articles dropped,
// whitespace collapsed.
std::string NormalizeAnswer(const std::string& text);
double TokenF1(const std::string& pred, const std::string& gold);

// Best-matching-answer accuracy and token F1 for span answers.
double AnswerAccuracy(const std::vector<std::string>& preds,
                      const std::vector<std::vector<std::string>>& answers);
double AnswerTokenF1(const std::vector<std::string>& preds,
                     const std::vector<std::vector<std::string>>& answers);

struct TaskScore {
  std::string task_id;
  std::map<std::string, double> metrics;

  double Composite() const;
};

// Mean of the values; EvalError(kEmpty) when there are none.
double CompositeScore(const std::map<std::string, double>& metrics);
double AvgScore(const std::vector<TaskScore>& scores);
// Throws EvalError(kTaskMismatch) unless both cover the same tasks.
double MaxDrop(const std::vector<TaskScore>& baseline,
               const std::vector<TaskScore>& method);

// Metrics of one task from predictions keyed by example id. MultiRC items
// are grouped by (passage, question); ReCoRD predictions are answer
// strings.
TaskScore ScoreTask(const TaskSpec& task, const Dataset& gold,
                    const std::map<std::string, std::string>& predictions);

struct MethodRun {
  std::string method;
  std::vector<TaskScore> tasks;
};

struct ReportRow {
  std::string method;
  // In report task order.
  std::vector<TaskScore> tasks;
  double avg = 0.0;
  // Unset for the baseline row.
  std::optional<double> max_drop;
};

struct Report {
  std::string baseline_method;
  std::vector<std::string> task_order;
  std::vector<ReportRow> rows;
};

// Tasks of the built-in order first, unknown tasks after them by name.
std::vector<std::string> ReportTaskOrder(const std::vector<MethodRun>& runs);

// The baseline is matched exactly, else ignoring ASCII case. Throws
// EvalError(kEmpty) without runs and EvalError(kInvalidArgument) when the
// baseline method is not among them.
Report BuildReport(const std::vector<MethodRun>& runs,
                   const std::string& baseline_method);

// Two decimals, half-up.
std::string FormatScore(double value);

std::string RenderReportText(const Report& report);
// One {"method", "task", "metric", "value"} object per line; composites use
// metric "composite", and the row summary uses task "all" with metrics
// "avg" and "md".
std::string RenderReportJsonl(const Report& report);

// Reads per-cell lines of the same shape back into runs, in first-seen
// method and task order. Summary lines (task "all") and composites are
// skipped.
std::vector<MethodRun> ParseCells(std::istream& in);

}  // namespace flipda

#endif  // FLIPDA_EVALKIT_H_
