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
#include <cstdio>
#include <set>
#include <sstream>

#include "flipda/error.h"
#include "flipda/evalkit.h"
#include "flipda/util.h"
#include "json.hpp"

namespace flipda {

namespace {

using EKind = EvalError::Kind;
using ordered_json = nlohmann::ordered_json;

const TaskScore* FindTask(const std::vector<TaskScore>& tasks,
                          const std::string& id) {
  for (const auto& t : tasks) {
    if (t.task_id == id) return &t;
  }
  return nullptr;
}

// Metric ids of a task in display order: the task's declared order when it
// is built in, else alphabetical.
std::vector<std::string> MetricOrder(const TaskScore& score) {
  std::vector<std::string> out;
  for (const auto& id : BuiltinTaskIds()) {
    if (id != score.task_id) continue;
    for (const auto& m : BuiltinTask(id).metrics) {
      if (score.metrics.count(m)) out.push_back(m);
    }
  }
  for (const auto& [m, v] : score.metrics) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

std::string Cell(const TaskScore& score) {
  std::string out;
  for (const auto& m : MetricOrder(score)) {
    if (!out.empty()) out += '/';
    out += FormatScore(score.metrics.at(m));
  }
  return out;
}

std::string DisplayName(const std::string& task_id) {
  const auto& ids = BuiltinTaskIds();
  if (std::find(ids.begin(), ids.end(), task_id) != ids.end()) {
    return BuiltinTask(task_id).display_name;
  }
  return task_id;
}

void EmitLine(std::string& out, const std::string& method,
              const std::string& task, const std::string& metric,
              double value) {
  ordered_json j;
  j["method"] = method;
  j["task"] = task;
  j["metric"] = metric;
  j["value"] = value;
  out += j.dump() + "\n";
}

}  // namespace

std::vector<std::string> ReportTaskOrder(const std::vector<MethodRun>& runs) {
  std::set<std::string> present;
  for (const auto& run : runs) {
    for (const auto& t : run.tasks) present.insert(t.task_id);
  }
  std::vector<std::string> order;
  for (const auto& id : BuiltinTaskIds()) {
    if (present.erase(id)) order.push_back(id);
  }
  order.insert(order.end(), present.begin(), present.end());
  return order;
}

Report BuildReport(const std::vector<MethodRun>& runs,
                   const std::string& baseline_method) {
  if (runs.empty()) throw EvalError(EKind::kEmpty, "no runs to report");
  const MethodRun* baseline = nullptr;
  for (const auto& run : runs) {
    if (run.method == baseline_method) baseline = &run;
  }
  for (const auto& run : runs) {
    if (baseline == nullptr &&
        AsciiLower(run.method) == AsciiLower(baseline_method)) {
      baseline = &run;
    }
  }
  if (baseline == nullptr) {
    throw EvalError(EKind::kInvalidArgument,
                    "baseline method " + baseline_method + " not found");
  }

  Report report;
  report.baseline_method = baseline->method;
  report.task_order = ReportTaskOrder(runs);
  for (const auto& run : runs) {
    ReportRow row;
    row.method = run.method;
    for (const auto& id : report.task_order) {
      const TaskScore* t = FindTask(run.tasks, id);
      if (t == nullptr) {
        throw EvalError(EKind::kTaskMismatch,
                        run.method + " has no score for " + id);
      }
      row.tasks.push_back(*t);
    }
    row.avg = AvgScore(row.tasks);
    if (&run != baseline) {
      row.max_drop = MaxDrop(baseline->tasks, row.tasks);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string FormatScore(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", RoundHalfUp2(value));
  return buf;
}

std::string RenderReportText(const Report& report) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Method"};
  for (const auto& id : report.task_order) header.push_back(DisplayName(id));
  header.push_back("Avg");
  header.push_back("MD");
  grid.push_back(header);
  for (const auto& row : report.rows) {
    std::vector<std::string> line = {row.method};
    if (row.method == report.baseline_method) line[0] += " *";
    for (const auto& t : row.tasks) line.push_back(Cell(t));
    line.push_back(FormatScore(row.avg));
    line.push_back(row.max_drop ? FormatScore(*row.max_drop) : "-");
    grid.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }
  std::string out;
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) text += "  ";
      const std::size_t pad = width[c] - line[c].size();
      // Method column left-aligned, scores right-aligned.
      text += c == 0 ? line[c] + std::string(pad, ' ')
                     : std::string(pad, ' ') + line[c];
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  out += "\n* baseline. Two-metric tasks score the mean of both metrics.\n";
  out += "CB F1 is macro-averaged over all declared classes.\n";
  const auto& order = report.task_order;
  if (std::find(order.begin(), order.end(), "record") != order.end()) {
    out += "ReCoRD F1 is token overlap against the best gold answer.\n";
  }
  return out;
}

std::string RenderReportJsonl(const Report& report) {
  std::string out;
  for (const auto& row : report.rows) {
    for (const auto& t : row.tasks) {
      for (const auto& m : MetricOrder(t)) {
        EmitLine(out, row.method, t.task_id, m, t.metrics.at(m));
      }
      EmitLine(out, row.method, t.task_id, "composite", t.Composite());
    }
    EmitLine(out, row.method, "all", "avg", row.avg);
    if (row.max_drop) EmitLine(out, row.method, "all", "md", *row.max_drop);
  }
  return out;
}

std::vector<MethodRun> ParseCells(std::istream& in) {
  std::vector<MethodRun> runs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (StripWhitespace(line).empty()) continue;
    std::string method, task, metric;
    double value = 0.0;
    try {
      const auto j = nlohmann::json::parse(line);
      method = j.at("method").get<std::string>();
      task = j.at("task").get<std::string>();
      metric = j.at("metric").get<std::string>();
      value = j.at("value").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw EvalError(EKind::kInvalidArgument,
                      "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (task == "all" || metric == "composite") continue;
    auto run = std::find_if(runs.begin(), runs.end(),
                            [&](const auto& r) { return r.method == method; });
    if (run == runs.end()) {
      runs.push_back({method, {}});
      run = std::prev(runs.end());
    }
    auto t = std::find_if(run->tasks.begin(), run->tasks.end(),
                          [&](const auto& s) { return s.task_id == task; });
    if (t == run->tasks.end()) {
      run->tasks.push_back({task, {}});
      t = std::prev(run->tasks.end());
    }
    t->metrics[metric] = value;
  }
  return runs;
}

}  // namespace flipda
