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

#include "flipda/corpus.h"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "flipda/error.h"
#include "flipda/util.h"
#include "json.hpp"

namespace flipda {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Kind = CorpusError::Kind;

bool IsBlank(const std::string& line) { return StripWhitespace(line).empty(); }

json ParseLine(const std::string& line, std::size_t line_no) {
  json value;
  try {
    value = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorpusError(Kind::kMalformedLine, line_no, e.what());
  }
  if (!value.is_object()) {
    throw CorpusError(Kind::kMalformedLine, line_no, "record is not an object");
  }
  return value;
}

std::string ScalarToString(const json& value, std::size_t line_no,
                           const char* what) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return value.dump();
  throw CorpusError(Kind::kMalformedLine, line_no,
                    std::string(what) + " must be a string, bool or integer");
}

const json* FindTextField(const json& record, const std::string& name) {
  auto it = record.find(name);
  if (it != record.end()) return &*it;
  for (const auto& [key, value] : record.items()) {
    if (!value.is_object()) continue;
    auto nested = value.find(name);
    if (nested != value.end()) return &*nested;
  }
  return nullptr;
}

std::vector<std::string> StringList(const json& value, std::size_t line_no,
                                    const char* what) {
  if (!value.is_array()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      std::string(what) + " must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw CorpusError(Kind::kMalformedLine, line_no,
                        std::string(what) + " entries must be strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

// ReCoRD lists entities as character spans into the passage and answers as
// {"text": ...} objects; plain string arrays are accepted too.
std::vector<std::string> EntityList(const json& value,
                                    const std::string& passage,
                                    std::size_t line_no, const char* what) {
  if (!value.is_array()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      std::string(what) + " must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_object() && item.contains("text") &&
               item["text"].is_string()) {
      out.push_back(item["text"].get<std::string>());
    } else if (item.is_object() && item.contains("start") &&
               item.contains("end") && item["start"].is_number_integer() &&
               item["end"].is_number_integer()) {
      const auto start = item["start"].get<long long>();
      const auto end = item["end"].get<long long>();
      if (start < 0 || end < start ||
          static_cast<std::size_t>(end) >= passage.size()) {
        throw CorpusError(Kind::kMalformedLine, line_no,
                          std::string(what) + " span out of range");
      }
      out.push_back(passage.substr(start, end - start + 1));
    } else {
      throw CorpusError(Kind::kMalformedLine, line_no,
                        std::string("unrecognized ") + what + " entry");
    }
  }
  return out;
}

Example ParseExample(const json& record, const TaskSpec& task,
                     std::size_t line_no) {
  Example ex;
  for (const auto& name : task.text_fields) {
    const json* value = FindTextField(record, name);
    if (value == nullptr) {
      throw CorpusError(Kind::kMissingField, line_no, "missing " + name);
    }
    if (!value->is_string()) {
      throw CorpusError(Kind::kMalformedLine, line_no,
                        name + " must be a string");
    }
    ex.fields[name] = value->get<std::string>();
  }

  auto label_it = record.find("label");
  if (label_it != record.end()) {
    ex.label = ScalarToString(*label_it, line_no, "label");
  } else if (task.default_label) {
    ex.label = *task.default_label;
  } else {
    throw CorpusError(Kind::kMissingField, line_no, "missing label");
  }
  if (!task.label_set.Contains(ex.label)) {
    throw CorpusError(Kind::kUnknownLabel, line_no,
                      "label \"" + ex.label + "\" not in task " + task.task_id);
  }

  auto idx_it = record.find("idx");
  if (idx_it != record.end()) {
    ex.id = ScalarToString(*idx_it, line_no, "idx");
  } else {
    ex.id = task.task_id + ":" + std::to_string(line_no);
  }

  if (task.uses_choices) {
    if (record.contains("choices")) {
      ex.choices = StringList(record["choices"], line_no, "choices");
    } else if (record.contains("choice1") && record.contains("choice2")) {
      std::vector<std::string> choices;
      for (const char* key : {"choice1", "choice2"}) {
        if (!record[key].is_string()) {
          throw CorpusError(Kind::kMalformedLine, line_no,
                            std::string(key) + " must be a string");
        }
        choices.push_back(record[key].get<std::string>());
      }
      ex.choices = std::move(choices);
    } else {
      throw CorpusError(Kind::kMissingField, line_no, "missing choices");
    }
    const auto index = task.label_set.IndexOf(ex.label);
    if (ex.choices->size() != task.label_set.size() || !index.has_value()) {
      throw CorpusError(Kind::kMalformedLine, line_no,
                        "one choice per label required");
    }
  }

  if (task.uses_entities) {
    static const std::string kNoPassage;
    auto passage_it = ex.fields.find("passage");
    const std::string& passage =
        passage_it == ex.fields.end() ? kNoPassage : passage_it->second;
    if (!record.contains("entities")) {
      throw CorpusError(Kind::kMissingField, line_no, "missing entities");
    }
    ex.entities = EntityList(record["entities"], passage, line_no, "entities");
    if (record.contains("answers")) {
      ex.answers = EntityList(record["answers"], passage, line_no, "answers");
    }
  }
  return ex;
}

void RequireOpen(const std::ios& stream, const std::filesystem::path& path) {
  if (!stream) {
    throw CorpusError(Kind::kIo, 0, "cannot open " + path.string());
  }
}

std::string Dump(const ordered_json& value) {
  try {
    return value.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::type_error& e) {
    throw CorpusError(Kind::kIo, 0, std::string("cannot encode: ") + e.what());
  }
}

ordered_json EncodeLabel(const std::string& label, const TaskSpec& task) {
  switch (task.label_encoding) {
    case LabelEncoding::kBool:
      return ordered_json(label == "true");
    case LabelEncoding::kInt:
      return ordered_json(std::stoll(label));
    case LabelEncoding::kString:
      break;
  }
  return ordered_json(label);
}

const json& Require(const json& record, const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw CorpusError(Kind::kMissingField, line_no,
                      std::string("missing ") + key);
  }
  return *it;
}

std::string RequireString(const json& record, const char* key,
                          std::size_t line_no) {
  const json& value = Require(record, key, line_no);
  if (!value.is_string()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      std::string(key) + " must be a string");
  }
  return value.get<std::string>();
}

CandidateRecord ParseCandidate(const json& record, std::size_t line_no) {
  CandidateRecord c;
  c.source_id = RequireString(record, "source_id", line_no);
  const json& fields = Require(record, "fields", line_no);
  if (!fields.is_object()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      "fields must be an object");
  }
  for (const auto& [key, value] : fields.items()) {
    if (!value.is_string()) {
      throw CorpusError(Kind::kMalformedLine, line_no,
                        "field " + key + " must be a string");
    }
    c.fields[key] = value.get<std::string>();
  }
  c.intended_label = RequireString(record, "intended_label", line_no);

  const json& gen = Require(record, "generation", line_no);
  if (!gen.is_object()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      "generation must be an object");
  }
  c.generation.method = RequireString(gen, "method", line_no);
  const json& ratio = Require(gen, "mask_ratio", line_no);
  if (!ratio.is_number()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      "mask_ratio must be a number");
  }
  c.generation.mask_ratio = ratio.get<double>();
  c.generation.decode = RequireString(gen, "decode", line_no);
  c.generation.fill_strategy = RequireString(gen, "fill_strategy", line_no);
  const json& seed = Require(gen, "seed", line_no);
  if (!seed.is_number_unsigned()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      "seed must be a non-negative integer");
  }
  c.generation.seed = seed.get<std::uint64_t>();

  const json& ok = Require(record, "consistency_ok", line_no);
  if (!ok.is_boolean()) {
    throw CorpusError(Kind::kMalformedLine, line_no,
                      "consistency_ok must be a bool");
  }
  c.consistency_ok = ok.get<bool>();
  if (record.contains("answers")) {
    c.answers = StringList(record["answers"], line_no, "answers");
  }
  return c;
}

}  // namespace

Dataset ParseDataset(std::istream& in, const TaskSpec& task) {
  Dataset out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    Example ex = ParseExample(ParseLine(line, line_no), task, line_no);
    if (!ids.insert(ex.id).second) {
      throw CorpusError(Kind::kDuplicateId, line_no,
                        "duplicate id \"" + ex.id + "\"");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

Dataset LoadDataset(const std::filesystem::path& path, const TaskSpec& task) {
  std::ifstream in(path, std::ios::binary);
  RequireOpen(in, path);
  return ParseDataset(in, task);
}

void WriteDataset(std::ostream& out, const Dataset& dataset,
                  const TaskSpec& task) {
  for (const auto& ex : dataset) {
    ordered_json record;
    record["idx"] = ex.id;
    for (const auto& name : task.text_fields) {
      auto it = ex.fields.find(name);
      record[name] = it == ex.fields.end() ? std::string() : it->second;
    }
    if (ex.choices) {
      if (ex.choices->size() == 2) {
        record["choice1"] = (*ex.choices)[0];
        record["choice2"] = (*ex.choices)[1];
      } else {
        record["choices"] = *ex.choices;
      }
    }
    if (ex.entities) record["entities"] = *ex.entities;
    if (ex.answers) record["answers"] = *ex.answers;
    record["label"] = EncodeLabel(ex.label, task);
    out << Dump(record) << '\n';
  }
  if (!out) throw CorpusError(Kind::kIo, 0, "write failed");
}

void SaveDataset(const std::filesystem::path& path, const Dataset& dataset,
                 const TaskSpec& task) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  RequireOpen(out, path);
  WriteDataset(out, dataset, task);
}

std::string CandidateToLine(const CandidateRecord& record,
                            const CandidateAnnotation* annotation) {
  ordered_json j;
  j["source_id"] = record.source_id;
  ordered_json fields = ordered_json::object();
  for (const auto& [key, value] : record.fields) fields[key] = value;
  j["fields"] = std::move(fields);
  j["intended_label"] = record.intended_label;
  ordered_json gen;
  gen["method"] = record.generation.method;
  gen["mask_ratio"] = record.generation.mask_ratio;
  gen["decode"] = record.generation.decode;
  gen["fill_strategy"] = record.generation.fill_strategy;
  gen["seed"] = record.generation.seed;
  j["generation"] = std::move(gen);
  j["consistency_ok"] = record.consistency_ok;
  if (record.answers) j["answers"] = *record.answers;
  if (annotation != nullptr) {
    j["assigned_label"] = annotation->assigned_label;
    j["p_assigned"] = annotation->p_assigned;
  }
  return Dump(j);
}

void WriteCandidates(std::ostream& out,
                     std::span<const CandidateRecord> candidates) {
  for (const auto& c : candidates) out << CandidateToLine(c) << '\n';
  if (!out) throw CorpusError(Kind::kIo, 0, "write failed");
}

void SaveCandidates(const std::filesystem::path& path,
                    std::span<const CandidateRecord> candidates) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  RequireOpen(out, path);
  WriteCandidates(out, candidates);
}

void SaveAnnotatedCandidates(const std::filesystem::path& path,
                             std::span<const CandidateRecord> candidates,
                             std::span<const CandidateAnnotation> annotations) {
  if (candidates.size() != annotations.size()) {
    throw std::invalid_argument("annotations must parallel candidates");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  RequireOpen(out, path);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out << CandidateToLine(candidates[i], &annotations[i]) << '\n';
  }
  if (!out) throw CorpusError(Kind::kIo, 0, "write failed");
}

std::vector<CandidateRecord> ParseCandidates(std::istream& in) {
  std::vector<CandidateRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    out.push_back(ParseCandidate(ParseLine(line, line_no), line_no));
  }
  return out;
}

std::vector<CandidateRecord> LoadCandidates(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  RequireOpen(in, path);
  return ParseCandidates(in);
}

std::optional<std::size_t> FindExample(const Dataset& dataset,
                                       std::string_view id) {
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].id == id) return i;
  }
  return std::nullopt;
}

}  // namespace flipda
