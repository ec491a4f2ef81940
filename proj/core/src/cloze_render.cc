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
#include <stdexcept>

#include "flipda/cloze.h"
#include "flipda/error.h"

namespace flipda {

namespace {

using Seg = TemplateSegment;
using CKind = ClozeError::Kind;

ClozeSpan LiteralSpan(std::string_view text) {
  ClozeSpan span;
  span.kind = SpanKind::kLiteral;
  span.tokens = Tokenize(text).tokens;
  for (auto& t : span.tokens) t.maskable = false;
  return span;
}

ClozeSpan FieldSpan(const std::string& field, std::string_view text,
                    bool maskable) {
  ClozeSpan span;
  span.kind = SpanKind::kField;
  span.field = field;
  span.tokens = Tokenize(text).tokens;
  for (auto& t : span.tokens) {
    t.maskable = maskable && t.kind == TokenKind::kWord;
  }
  return span;
}

ClozeSpan LabelSpan(std::string_view text) {
  ClozeSpan span = LiteralSpan(text);
  span.kind = SpanKind::kLabel;
  return span;
}

const std::string& RequireField(const std::map<std::string, std::string>& f,
                                const std::string& name) {
  auto it = f.find(name);
  if (it == f.end()) {
    throw ClozeError(CKind::kInvalidArgument, "missing field " + name);
  }
  return it->second;
}

std::pair<std::string, std::string> SplitPlaceholder(const TaskSpec& task,
                                                     const std::string& text) {
  const auto at = text.find(task.placeholder_token);
  if (at == std::string::npos) {
    throw ClozeError(
        CKind::kInvalidArgument,
        task.placeholder_field + " has no " + task.placeholder_token);
  }
  return {text.substr(0, at), text.substr(at + task.placeholder_token.size())};
}

// Renders template segments into one sequence. The placeholder field, when
// the rule asks for it, becomes [field part, label, field part].
ClozeSequence BuildSequence(const TaskSpec& task, const ClozeTemplate& tmpl,
                            const std::map<std::string, std::string>& fields,
                            std::string_view label_text) {
  ClozeSequence seq;
  for (const auto& seg : tmpl.segments) {
    switch (seg.kind) {
      case Seg::Kind::kLiteral:
        seq.spans.push_back(LiteralSpan(seg.text));
        break;
      case Seg::Kind::kLabel:
        seq.spans.push_back(LabelSpan(label_text));
        break;
      case Seg::Kind::kSwitch: {
        const auto& value = RequireField(fields, seg.field);
        auto it = seg.cases.find(value);
        if (it == seg.cases.end()) {
          throw ClozeError(CKind::kInvalidArgument,
                           "unexpected " + seg.field + " value: " + value);
        }
        seq.spans.push_back(LiteralSpan(it->second));
        break;
      }
      case Seg::Kind::kField: {
        const auto& text = RequireField(fields, seg.field);
        if (tmpl.rule == FlipRule::kRecordPlaceholder &&
            seg.field == task.placeholder_field) {
          auto [head, tail] = SplitPlaceholder(task, text);
          seq.spans.push_back(FieldSpan(seg.field, head, seg.maskable));
          seq.spans.push_back(LabelSpan(label_text));
          seq.spans.push_back(FieldSpan(seg.field, tail, seg.maskable));
        } else {
          seq.spans.push_back(FieldSpan(seg.field, text, seg.maskable));
        }
        break;
      }
    }
  }
  return seq;
}

std::string FlipQuestion(const std::string& question) {
  if (question == "cause") return "effect";
  if (question == "effect") return "cause";
  throw ClozeError(CKind::kInvalidArgument, "unexpected question " + question);
}

std::vector<std::string> DistinctEntities(const Example& ex) {
  std::vector<std::string> out;
  for (const auto& e : *ex.entities) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

std::vector<std::string> WicContextSentences(const Example& ex,
                                             const Dataset* pool) {
  std::vector<std::string> out;
  if (pool == nullptr) return out;
  for (const auto& other : *pool) {
    if (other.id == ex.id) continue;
    for (const char* name : {"sentence1", "sentence2"}) {
      auto it = other.fields.find(name);
      if (it != other.fields.end() && !it->second.empty()) {
        out.push_back(it->second);
      }
    }
  }
  return out;
}

void CarryUnrendered(const TaskSpec& task, const Example& ex,
                     ClozeInstance& instance,
                     const std::map<std::string, std::string>& fields) {
  for (const auto& name : task.text_fields) {
    bool rendered = false;
    for (const auto& seq : instance.sequences) {
      for (const auto& span : seq.spans) {
        rendered =
            rendered || (span.kind == SpanKind::kField && span.field == name);
      }
    }
    if (rendered) continue;
    auto it = fields.find(name);
    if (it != fields.end()) {
      instance.carried_fields[name] = it->second;
    } else if (auto src = ex.fields.find(name); src != ex.fields.end()) {
      instance.carried_fields[name] = src->second;
    }
  }
}

}  // namespace

std::string ClozeSequence::Text() const {
  std::string out;
  for (const auto& span : spans) {
    for (const auto& t : span.tokens) out += t.surface;
  }
  return out;
}

std::string ClozeInstance::Text() const {
  std::string out;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (i > 0) out += '\n';
    out += sequences[i].Text();
  }
  return out;
}

std::size_t ClozeInstance::TokenCount() const {
  std::size_t n = 0;
  for (const auto& seq : sequences) {
    for (const auto& span : seq.spans) n += span.tokens.size();
  }
  return n;
}

namespace {

template <typename Fn>
decltype(auto) VisitFlat(const ClozeInstance& instance, std::size_t flat,
                         Fn fn) {
  for (const auto& seq : instance.sequences) {
    for (const auto& span : seq.spans) {
      if (flat < span.tokens.size()) return fn(span, span.tokens[flat]);
      flat -= span.tokens.size();
    }
  }
  throw std::out_of_range("token index out of range");
}

}  // namespace

const Token& ClozeInstance::TokenAt(std::size_t flat) const {
  return VisitFlat(
      *this, flat,
      [](const ClozeSpan&, const Token& t) -> const Token& { return t; });
}

SpanKind ClozeInstance::SpanKindAt(std::size_t flat) const {
  return VisitFlat(*this, flat,
                   [](const ClozeSpan& s, const Token&) { return s.kind; });
}

std::vector<std::size_t> ClozeInstance::MaskablePositions() const {
  std::vector<std::size_t> out;
  std::size_t flat = 0;
  for (const auto& seq : sequences) {
    for (const auto& span : seq.spans) {
      for (const auto& t : span.tokens) {
        if (span.kind == SpanKind::kField && t.maskable) out.push_back(flat);
        ++flat;
      }
    }
  }
  return out;
}

ClozeInstance RenderCloze(const TaskSpec& task, const Example& example,
                          std::string_view target_label, Rng& rng,
                          const Dataset* training_pool) {
  if (!task.label_set.Contains(target_label)) {
    throw ClozeError(CKind::kInvalidArgument,
                     "unknown label " + std::string(target_label));
  }
  if (!task.AllowsTarget(example.label, target_label)) {
    throw ClozeError(CKind::kFlipNotAllowed, task.task_id + " does not allow " +
                                                 example.label + " -> " +
                                                 std::string(target_label));
  }

  ClozeInstance instance;
  instance.task_id = task.task_id;
  instance.source_id = example.id;
  instance.source_label = example.label;
  instance.target_label = std::string(target_label);

  const ClozeTemplate& tmpl = task.TemplateFor(target_label);
  std::map<std::string, std::string> fields = example.fields;
  const bool flip = example.label != target_label;

  switch (tmpl.rule) {
    case FlipRule::kVerbalizer:
      instance.label_text = task.label_set.Verbalize(target_label);
      instance.sequences.push_back(
          BuildSequence(task, tmpl, fields, instance.label_text));
      break;

    case FlipRule::kCopaChoiceSwap: {
      if (!example.choices ||
          example.choices->size() != task.label_set.size()) {
        throw ClozeError(CKind::kMissingChoices,
                         example.id + ": choices missing");
      }
      if (flip && rng.Bernoulli(0.5)) {
        fields["question"] = FlipQuestion(RequireField(fields, "question"));
        instance.question_flipped = true;
      }
      instance.label_text =
          (*example.choices)[*task.label_set.IndexOf(target_label)];
      instance.sequences.push_back(
          BuildSequence(task, tmpl, fields, instance.label_text));
      break;
    }

    case FlipRule::kRecordPlaceholder: {
      if (!example.entities || example.entities->empty()) {
        throw ClozeError(CKind::kMissingEntities,
                         example.id + ": entities missing");
      }
      const auto& default_label = task.label_set.labels().front();
      std::vector<std::string> pool;
      if (target_label == default_label) {
        if (example.answers) pool = *example.answers;
      } else {
        for (auto& e : DistinctEntities(example)) {
          const bool is_answer =
              example.answers &&
              std::find(example.answers->begin(), example.answers->end(), e) !=
                  example.answers->end();
          if (!is_answer) pool.push_back(std::move(e));
        }
      }
      if (pool.empty()) {
        throw ClozeError(
            CKind::kMissingEntities,
            example.id + ": no entity for " + std::string(target_label));
      }
      instance.label_text = pool[rng.Uniform(pool.size())];
      instance.substituted_answer = instance.label_text;
      instance.placeholder_field = task.placeholder_field;
      instance.placeholder_token = task.placeholder_token;
      instance.sequences.push_back(
          BuildSequence(task, tmpl, fields, instance.label_text));
      break;
    }

    case FlipRule::kWicSplit: {
      instance.label_text = task.label_set.Verbalize(target_label);
      const auto context = WicContextSentences(example, training_pool);
      for (const auto& seg : tmpl.segments) {
        if (seg.kind != Seg::Kind::kField) continue;
        ClozeSequence seq;
        seq.spans.push_back(FieldSpan(
            seg.field, RequireField(fields, seg.field), seg.maskable));
        if (!context.empty()) {
          seq.spans.push_back(LiteralSpan(" "));
          seq.spans.push_back(
              LiteralSpan(context[rng.Uniform(context.size())]));
        }
        instance.sequences.push_back(std::move(seq));
      }
      break;
    }
  }

  CarryUnrendered(task, example, instance, fields);
  return instance;
}

MaskPlan PlanMask(const ClozeInstance& instance, double ratio,
                  std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("mask ratio must be in (0, 1]");
  }
  const auto maskable = instance.MaskablePositions();
  Rng rng(seed);
  MaskPlan plan;
  plan.ratio = ratio;
  plan.seed = seed;
  for (std::size_t i : rng.SampleWithoutReplacement(
           maskable.size(), RoundHalfUpCount(ratio, maskable.size()))) {
    plan.positions.push_back(maskable[i]);
  }
  std::sort(plan.positions.begin(), plan.positions.end());
  return plan;
}

std::string RenderLabelBlank(const TaskSpec& task,
                             const ClozeInstance& instance,
                             const std::map<std::string, std::string>& fields) {
  const ClozeTemplate& tmpl = task.JointTemplateFor(instance.target_label);
  if (tmpl.rule == FlipRule::kRecordPlaceholder) {
    // The filled query already carries the entity; put the placeholder back
    // where it stood so the label slot can be blanked.
    std::map<std::string, std::string> restored = fields;
    auto& query = restored[task.placeholder_field];
    if (instance.substituted_answer &&
        query.find(task.placeholder_token) == std::string::npos) {
      const auto at = query.find(*instance.substituted_answer);
      if (at == std::string::npos) {
        throw ClozeError(CKind::kInvalidArgument,
                         "substituted answer not found in query");
      }
      query.replace(at, instance.substituted_answer->size(),
                    task.placeholder_token);
    }
    return BuildSequence(task, tmpl, restored, BlankSentinel(0)).Text();
  }
  return BuildSequence(task, tmpl, fields, BlankSentinel(0)).Text();
}

std::string RenderClassifierInput(
    const TaskSpec& task, const std::map<std::string, std::string>& fields,
    const std::vector<std::string>* choices) {
  std::string out;
  for (const auto& name : task.text_fields) {
    auto it = fields.find(name);
    if (it == fields.end()) continue;
    if (!out.empty()) out += ' ';
    out += it->second;
  }
  if (choices != nullptr) {
    for (const auto& c : *choices) {
      if (!out.empty()) out += ' ';
      out += c;
    }
  }
  return out;
}

}  // namespace flipda
