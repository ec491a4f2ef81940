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

#ifndef FLIPDA_TASK_H_
#define FLIPDA_TASK_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flipda {

// How labels are spelled in dataset files. Saved datasets reproduce it so
// downstream trainers see the original encoding.
enum class LabelEncoding { kString, kBool, kInt };

class LabelSet {
 public:
  LabelSet() = default;
  // Throws std::invalid_argument unless labels are non-empty and unique and
  // every label has exactly one verbalization, unique within the set.
  LabelSet(std::vector<std::string> labels,
           std::map<std::string, std::string> verbalizer);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool Contains(std::string_view label) const;
  // Position in label order; std::nullopt for unknown labels.
  std::optional<std::size_t> IndexOf(std::string_view label) const;
  const std::string& Verbalize(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::string> verbalizer_;
};

struct TemplateSegment {
  enum class Kind {
    kLiteral,
    kField,
    kLabel,
    // Literal chosen by the current value of `field` (COPA connective).
    kSwitch,
  };

  Kind kind = Kind::kLiteral;
  std::string text;
  std::string field;
  bool maskable = false;
  std::map<std::string, std::string> cases;

  static TemplateSegment Literal(std::string text);
  static TemplateSegment Field(std::string name, bool maskable);
  static TemplateSegment Label();
  static TemplateSegment Switch(std::string field,
                                std::map<std::string, std::string> cases);
};

// Per-task rendering behaviour layered on top of the segment list.
enum class FlipRule {
  // Label slot carries the verbalizer token of the target label.
  kVerbalizer,
  // Label slot carries the target choice; flips toggle the question
  // (cause/effect) with probability 1/2.
  kCopaChoiceSwap,
  // The placeholder field is split at the placeholder token and the label
  // slot carries the substituted entity.
  kRecordPlaceholder,
  // Each field is rendered as its own sequence with a sampled training
  // sentence appended; no label slot.
  kWicSplit,
};

struct ClozeTemplate {
  std::vector<TemplateSegment> segments;
  FlipRule rule = FlipRule::kVerbalizer;

  bool HasLabelSlot() const;
  // Field names in first-appearance order.
  std::vector<std::string> ReferencedFields() const;
};

enum class FlipPolicy {
  kFull,
  // Only the source label may be targeted.
  kNone,
  kQuestionFlip,
};

const char* FlipPolicyName(FlipPolicy policy);

struct TaskSpec {
  std::string task_id;
  std::string display_name;
  std::vector<std::string> text_fields;
  LabelSet label_set;
  std::map<std::string, ClozeTemplate> templates;
  FlipPolicy flip_policy = FlipPolicy::kFull;
  std::vector<std::string> metrics;
  std::size_t max_seq_tokens = 512;

  LabelEncoding label_encoding = LabelEncoding::kString;
  // Label assumed when a dataset line has none (ReCoRD rows carry answers,
  // not labels).
  std::optional<std::string> default_label;
  bool uses_choices = false;
  bool uses_entities = false;
  std::string placeholder_field;
  std::string placeholder_token = "@placeholder";

  bool HasField(std::string_view name) const;
  bool AllowsTarget(std::string_view source_label,
                    std::string_view target_label) const;
  const ClozeTemplate& TemplateFor(std::string_view target_label) const;
  // The template used for the label-blank consistency pass: the target's own
  // template when it has a label slot, else the first one in label order
  // that does.
  const ClozeTemplate& JointTemplateFor(std::string_view target_label) const;
  // Fields that some template marks maskable; baseline augmenters rewrite
  // exactly these.
  std::vector<std::string> AugmentableFields() const;

  // Throws std::invalid_argument on violated invariants.
  void Validate() const;
};

// The eight built-in tasks: boolq, cb, copa, rte, wic, wsc, multirc, record.
const std::vector<std::string>& BuiltinTaskIds();
// Throws std::invalid_argument for unknown ids.
const TaskSpec& BuiltinTask(std::string_view task_id);

}  // namespace flipda

#endif  // FLIPDA_TASK_H_
