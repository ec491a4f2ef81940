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

#include "flipda/task.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace flipda {

LabelSet::LabelSet(std::vector<std::string> labels,
                   std::map<std::string, std::string> verbalizer)
    : labels_(std::move(labels)), verbalizer_(std::move(verbalizer)) {
  if (labels_.empty()) throw std::invalid_argument("label set is empty");
  std::set<std::string> seen_labels(labels_.begin(), labels_.end());
  if (seen_labels.size() != labels_.size()) {
    throw std::invalid_argument("duplicate label in label set");
  }
  if (verbalizer_.size() != labels_.size()) {
    throw std::invalid_argument("verbalizer must cover exactly the labels");
  }
  std::set<std::string> seen_tokens;
  for (const auto& label : labels_) {
    auto it = verbalizer_.find(label);
    if (it == verbalizer_.end()) {
      throw std::invalid_argument("label without verbalization: " + label);
    }
    if (!seen_tokens.insert(it->second).second) {
      throw std::invalid_argument("duplicate verbalization: " + it->second);
    }
  }
}

bool LabelSet::Contains(std::string_view label) const {
  return IndexOf(label).has_value();
}

std::optional<std::size_t> LabelSet::IndexOf(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

const std::string& LabelSet::Verbalize(std::string_view label) const {
  auto it = verbalizer_.find(std::string(label));
  if (it == verbalizer_.end()) {
    throw std::invalid_argument("unknown label: " + std::string(label));
  }
  return it->second;
}

TemplateSegment TemplateSegment::Literal(std::string text) {
  TemplateSegment s;
  s.kind = Kind::kLiteral;
  s.text = std::move(text);
  return s;
}

TemplateSegment TemplateSegment::Field(std::string name, bool maskable) {
  TemplateSegment s;
  s.kind = Kind::kField;
  s.field = std::move(name);
  s.maskable = maskable;
  return s;
}

TemplateSegment TemplateSegment::Label() {
  TemplateSegment s;
  s.kind = Kind::kLabel;
  return s;
}

TemplateSegment TemplateSegment::Switch(
    std::string field, std::map<std::string, std::string> cases) {
  TemplateSegment s;
  s.kind = Kind::kSwitch;
  s.field = std::move(field);
  s.cases = std::move(cases);
  return s;
}

bool ClozeTemplate::HasLabelSlot() const {
  if (rule == FlipRule::kRecordPlaceholder) return true;
  return std::any_of(segments.begin(), segments.end(), [](const auto& s) {
    return s.kind == TemplateSegment::Kind::kLabel;
  });
}

std::vector<std::string> ClozeTemplate::ReferencedFields() const {
  std::vector<std::string> out;
  for (const auto& s : segments) {
    if (s.kind != TemplateSegment::Kind::kField &&
        s.kind != TemplateSegment::Kind::kSwitch) {
      continue;
    }
    if (std::find(out.begin(), out.end(), s.field) == out.end()) {
      out.push_back(s.field);
    }
  }
  return out;
}

const char* FlipPolicyName(FlipPolicy policy) {
  switch (policy) {
    case FlipPolicy::kFull:
      return "full";
    case FlipPolicy::kNone:
      return "none";
    case FlipPolicy::kQuestionFlip:
      return "question_flip";
  }
  return "unknown";
}

bool TaskSpec::HasField(std::string_view name) const {
  return std::find(text_fields.begin(), text_fields.end(), name) !=
         text_fields.end();
}

bool TaskSpec::AllowsTarget(std::string_view source_label,
                            std::string_view target_label) const {
  if (!label_set.Contains(target_label)) return false;
  if (flip_policy == FlipPolicy::kNone) return source_label == target_label;
  return true;
}

const ClozeTemplate& TaskSpec::TemplateFor(
    std::string_view target_label) const {
  auto it = templates.find(std::string(target_label));
  if (it == templates.end()) {
    throw std::invalid_argument("no template for label " +
                                std::string(target_label));
  }
  return it->second;
}

const ClozeTemplate& TaskSpec::JointTemplateFor(
    std::string_view target_label) const {
  const ClozeTemplate& own = TemplateFor(target_label);
  if (own.HasLabelSlot()) return own;
  for (const auto& label : label_set.labels()) {
    const ClozeTemplate& t = TemplateFor(label);
    if (t.HasLabelSlot()) return t;
  }
  throw std::invalid_argument("task " + task_id + " has no label slot");
}

std::vector<std::string> TaskSpec::AugmentableFields() const {
  std::vector<std::string> out;
  for (const auto& name : text_fields) {
    bool maskable = false;
    for (const auto& [label, tmpl] : templates) {
      for (const auto& s : tmpl.segments) {
        if (s.kind == TemplateSegment::Kind::kField && s.field == name &&
            s.maskable) {
          maskable = true;
        }
      }
    }
    if (maskable) out.push_back(name);
  }
  return out;
}

void TaskSpec::Validate() const {
  if (task_id.empty()) throw std::invalid_argument("task id is empty");
  if (text_fields.empty()) {
    throw std::invalid_argument(task_id + ": no text fields");
  }
  for (const auto& label : label_set.labels()) {
    auto it = templates.find(label);
    if (it == templates.end()) {
      throw std::invalid_argument(task_id + ": no template for " + label);
    }
    std::size_t label_slots = 0;
    for (const auto& s : it->second.segments) {
      if (s.kind == TemplateSegment::Kind::kLabel) ++label_slots;
    }
    if (label_slots > 1) {
      throw std::invalid_argument(task_id + ": more than one label slot");
    }
    for (const auto& field : it->second.ReferencedFields()) {
      if (!HasField(field)) {
        throw std::invalid_argument(task_id + ": template references " +
                                    "undeclared field " + field);
      }
    }
  }
  if (!placeholder_field.empty() && !HasField(placeholder_field)) {
    throw std::invalid_argument(task_id + ": undeclared placeholder field");
  }
  if (default_label && !label_set.Contains(*default_label)) {
    throw std::invalid_argument(task_id + ": default label not in label set");
  }
  if (max_seq_tokens == 0) {
    throw std::invalid_argument(task_id + ": max_seq_tokens must be > 0");
  }
}

namespace {

using Seg = TemplateSegment;

std::map<std::string, ClozeTemplate> SameTemplate(const LabelSet& labels,
                                                  const ClozeTemplate& t) {
  std::map<std::string, ClozeTemplate> out;
  for (const auto& label : labels.labels()) out[label] = t;
  return out;
}

TaskSpec MakeBoolQ() {
  TaskSpec t;
  t.task_id = "boolq";
  t.display_name = "BoolQ";
  t.text_fields = {"question", "passage"};
  t.label_set = LabelSet({"true", "false"}, {{"true", "Yes"}, {"false", "No"}});
  t.label_encoding = LabelEncoding::kBool;
  t.templates = SameTemplate(
      t.label_set,
      {{Seg::Field("question", true), Seg::Literal("?"), Seg::Label(),
        Seg::Literal(", "), Seg::Field("passage", true)}});
  t.metrics = {"acc"};
  return t;
}

TaskSpec MakeCb() {
  TaskSpec t;
  t.task_id = "cb";
  t.display_name = "CB";
  t.text_fields = {"premise", "hypothesis"};
  t.label_set = LabelSet(
      {"entailment", "contradiction", "neutral"},
      {{"entailment", "Yes"}, {"contradiction", "No"}, {"neutral", "Maybe"}});
  t.templates = SameTemplate(
      t.label_set, {{Seg::Literal("\""), Seg::Field("hypothesis", true),
                     Seg::Literal("\" ?"), Seg::Label(), Seg::Literal(". \""),
                     Seg::Field("premise", true), Seg::Literal("\"")}});
  t.metrics = {"acc", "f1"};
  return t;
}

TaskSpec MakeCopa() {
  TaskSpec t;
  t.task_id = "copa";
  t.display_name = "COPA";
  t.text_fields = {"premise", "question"};
  // Label slot text comes from the example's choices, not these tokens.
  t.label_set = LabelSet({"0", "1"}, {{"0", "choice1"}, {"1", "choice2"}});
  t.label_encoding = LabelEncoding::kInt;
  t.uses_choices = true;
  ClozeTemplate tmpl{{Seg::Field("premise", true),
                      Seg::Switch("question", {{"effect", " so that "},
                                               {"cause", ", because "}}),
                      Seg::Label()},
                     FlipRule::kCopaChoiceSwap};
  t.templates = SameTemplate(t.label_set, tmpl);
  t.flip_policy = FlipPolicy::kQuestionFlip;
  t.metrics = {"acc"};
  return t;
}

TaskSpec MakeRte() {
  TaskSpec t;
  t.task_id = "rte";
  t.display_name = "RTE";
  t.text_fields = {"premise", "hypothesis"};
  t.label_set = LabelSet({"entailment", "not_entailment"},
                         {{"entailment", "Yes"}, {"not_entailment", "No"}});
  t.templates = SameTemplate(
      t.label_set,
      {{Seg::Field("hypothesis", true), Seg::Literal("?"), Seg::Label(),
        Seg::Literal(", "), Seg::Field("premise", true)}});
  t.metrics = {"acc"};
  return t;
}

TaskSpec MakeWic() {
  TaskSpec t;
  t.task_id = "wic";
  t.display_name = "WiC";
  t.text_fields = {"sentence1", "sentence2", "word"};
  t.label_set = LabelSet({"true", "false"},
                         {{"true", "the same"}, {"false", "different"}});
  t.label_encoding = LabelEncoding::kBool;
  t.templates["true"] =
      ClozeTemplate{{Seg::Field("sentence1", true), Seg::Literal(". "),
                     Seg::Field("sentence2", true), Seg::Literal(". Word \" "),
                     Seg::Field("word", false), Seg::Literal(" \" means "),
                     Seg::Label(), Seg::Literal(" in the two sentences")}};
  t.templates["false"] = ClozeTemplate{
      {Seg::Field("sentence1", true), Seg::Field("sentence2", true)},
      FlipRule::kWicSplit};
  t.metrics = {"acc"};
  return t;
}

TaskSpec MakeWsc() {
  TaskSpec t;
  t.task_id = "wsc";
  t.display_name = "WSC";
  t.text_fields = {"text", "span1_text", "span2_text"};
  t.label_set = LabelSet({"true", "false"}, {{"true", "Yes"}, {"false", "No"}});
  t.label_encoding = LabelEncoding::kBool;
  t.templates = SameTemplate(
      t.label_set,
      {{Seg::Field("text", true), Seg::Literal(" Does the pronoun \""),
        Seg::Field("span2_text", false), Seg::Literal("\" refer to "),
        Seg::Field("span1_text", false), Seg::Literal("?"), Seg::Label()}});
  t.flip_policy = FlipPolicy::kNone;
  t.metrics = {"acc"};
  return t;
}

TaskSpec MakeMultiRc() {
  TaskSpec t;
  t.task_id = "multirc";
  t.display_name = "MultiRC";
  t.text_fields = {"passage", "question", "answer"};
  t.label_set = LabelSet({"true", "false"}, {{"true", "Yes"}, {"false", "No"}});
  t.label_encoding = LabelEncoding::kBool;
  t.templates = SameTemplate(
      t.label_set,
      {{Seg::Field("question", true),
        Seg::Literal("? Is the correct answer \""), Seg::Field("answer", true),
        Seg::Literal("\"?"), Seg::Label(), Seg::Literal(". "),
        Seg::Field("passage", true)}});
  t.metrics = {"em", "f1a"};
  return t;
}

TaskSpec MakeRecord() {
  TaskSpec t;
  t.task_id = "record";
  t.display_name = "ReCoRD";
  t.text_fields = {"passage", "query"};
  // "true": the query's answer is one of the source example's answers;
  // "false": it was swapped for another entity of the passage.
  t.label_set = LabelSet({"true", "false"}, {{"true", "Yes"}, {"false", "No"}});
  t.label_encoding = LabelEncoding::kBool;
  t.default_label = "true";
  t.uses_entities = true;
  t.placeholder_field = "query";
  t.templates =
      SameTemplate(t.label_set, {{Seg::Field("query", true), Seg::Literal(". "),
                                  Seg::Field("passage", true)},
                                 FlipRule::kRecordPlaceholder});
  t.metrics = {"acc", "f1"};
  return t;
}

std::vector<TaskSpec> MakeBuiltins() {
  std::vector<TaskSpec> out = {MakeBoolQ(),   MakeCb(),    MakeCopa(),
                               MakeRte(),     MakeWic(),   MakeWsc(),
                               MakeMultiRc(), MakeRecord()};
  for (const auto& t : out) t.Validate();
  return out;
}

const std::vector<TaskSpec>& Builtins() {
  static const std::vector<TaskSpec> tasks = MakeBuiltins();
  return tasks;
}

}  // namespace

const std::vector<std::string>& BuiltinTaskIds() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& t : Builtins()) out.push_back(t.task_id);
    return out;
  }();
  return ids;
}

const TaskSpec& BuiltinTask(std::string_view task_id) {
  for (const auto& t : Builtins()) {
    if (t.task_id == task_id) return t;
  }
  throw std::invalid_argument("unknown task: " + std::string(task_id));
}

}  // namespace flipda
