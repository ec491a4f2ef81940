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

#include "flipda/backends.h"

#include <cmath>
#include <map>
#include <stdexcept>

#include "flipda/error.h"
#include "json.hpp"

namespace flipda {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Kind = BackendError::Kind;

constexpr std::string_view kSentinelPrefix = "[BLANK_";

}  // namespace

const char* DecodeStrategyName(DecodeStrategy strategy) {
  switch (strategy) {
    case DecodeStrategy::kGreedy:
      return "greedy";
    case DecodeStrategy::kSample:
      return "sample";
    case DecodeStrategy::kBeam:
      return "beam";
  }
  return "unknown";
}

DecodeStrategy ParseDecodeStrategy(std::string_view name) {
  if (name == "greedy") return DecodeStrategy::kGreedy;
  if (name == "sample") return DecodeStrategy::kSample;
  if (name == "beam") return DecodeStrategy::kBeam;
  throw std::invalid_argument("unknown decode strategy: " + std::string(name));
}

std::string BlankSentinel(std::size_t index) {
  return std::string(kSentinelPrefix) + std::to_string(index) + "]";
}

void ValidateInfillRequest(const InfillRequest& request) {
  const std::string& text = request.text_with_sentinels;
  std::map<std::size_t, int> seen;
  std::size_t pos = 0;
  while ((pos = text.find(kSentinelPrefix, pos)) != std::string::npos) {
    std::size_t cursor = pos + kSentinelPrefix.size();
    std::size_t index = 0;
    std::size_t digits = 0;
    while (cursor < text.size() && text[cursor] >= '0' && text[cursor] <= '9' &&
           digits < 19) {
      index = index * 10 + static_cast<std::size_t>(text[cursor] - '0');
      ++cursor;
      ++digits;
    }
    if (digits > 0 && cursor < text.size() && text[cursor] == ']') {
      ++seen[index];
      pos = cursor + 1;
    } else {
      pos += kSentinelPrefix.size();
    }
  }
  for (const auto& [index, count] : seen) {
    if (index >= request.blank_count) {
      throw BackendError(Kind::kPrecondition,
                         "unexpected sentinel " + BlankSentinel(index));
    }
    if (count != 1) {
      throw BackendError(Kind::kPrecondition,
                         "sentinel " + BlankSentinel(index) + " appears " +
                             std::to_string(count) + " times");
    }
  }
  if (seen.size() != request.blank_count) {
    throw BackendError(Kind::kPrecondition,
                       "expected " + std::to_string(request.blank_count) +
                           " sentinels, found " + std::to_string(seen.size()));
  }
}

void NormalizeClassifyResponse(const ClassifyRequest& request,
                               ClassifyResponse& response) {
  if (response.probs.size() != request.rendered_inputs.size()) {
    throw BackendError(Kind::kDimensionMismatch,
                       "expected " +
                           std::to_string(request.rendered_inputs.size()) +
                           " probability vectors, got " +
                           std::to_string(response.probs.size()));
  }
  for (auto& vec : response.probs) {
    if (vec.size() != request.labels.size()) {
      throw BackendError(Kind::kDimensionMismatch,
                         "probability vector of length " +
                             std::to_string(vec.size()) + " for " +
                             std::to_string(request.labels.size()) + " labels");
    }
    double sum = 0.0;
    for (double p : vec) {
      if (!std::isfinite(p) || p < 0.0) {
        throw BackendError(Kind::kProtocol, "invalid probability");
      }
      sum += p;
    }
    if (!(sum > 0.0)) {
      throw BackendError(Kind::kProtocol, "probability vector sums to zero");
    }
    for (double& p : vec) p /= sum;
  }
}

InfillResponse InfillBackend::Infill(const InfillRequest& request) {
  ValidateInfillRequest(request);
  if (request.blank_count == 0) return {};
  InfillResponse response = DoInfill(request);
  if (response.fills.size() != request.blank_count) {
    throw BackendError(Kind::kBlankCountMismatch,
                       "requested " + std::to_string(request.blank_count) +
                           " fills, got " +
                           std::to_string(response.fills.size()));
  }
  return response;
}

ClassifyResponse ClassifierBackend::Classify(const ClassifyRequest& request) {
  if (request.labels.empty()) {
    throw BackendError(Kind::kPrecondition, "classify request without labels");
  }
  if (request.rendered_inputs.empty()) return {};
  ClassifyResponse response = DoClassify(request);
  NormalizeClassifyResponse(request, response);
  return response;
}

TranslateResponse TranslatorBackend::Translate(
    const TranslateRequest& request) {
  if (request.src == request.tgt) {
    throw BackendError(Kind::kPrecondition,
                       "source and target language are both " + request.src);
  }
  if (request.texts.empty()) return {};
  TranslateResponse response = DoTranslate(request);
  if (response.texts.size() != request.texts.size()) {
    throw BackendError(Kind::kDimensionMismatch,
                       "expected " + std::to_string(request.texts.size()) +
                           " translations, got " +
                           std::to_string(response.texts.size()));
  }
  return response;
}

bool BackendConfig::IsStub() const {
  return endpoint == "stub" || endpoint.rfind("stub:", 0) == 0;
}

void BackendConfig::Validate() const {
  if (endpoint.empty()) throw std::invalid_argument("empty backend endpoint");
  if (max_parallel < 1)
    throw std::invalid_argument("max_parallel must be >= 1");
  if (retries < 0) throw std::invalid_argument("retries must be >= 0");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be > 0");
  if (!IsStub() && endpoint.rfind("http://", 0) != 0) {
    throw std::invalid_argument("backend endpoint must be stub or http://: " +
                                endpoint);
  }
}

namespace wire {

namespace {

json Parse(std::string_view body) {
  try {
    json value = json::parse(body);
    if (!value.is_object()) {
      throw BackendError(Kind::kProtocol, "body is not a JSON object");
    }
    return value;
  } catch (const json::parse_error& e) {
    throw BackendError(Kind::kProtocol, e.what());
  }
}

const json& Member(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw BackendError(Kind::kProtocol, std::string("missing key ") + key);
  }
  return *it;
}

std::string String(const json& obj, const char* key) {
  const json& v = Member(obj, key);
  if (!v.is_string()) {
    throw BackendError(Kind::kProtocol, std::string(key) + " must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> Strings(const json& obj, const char* key) {
  const json& v = Member(obj, key);
  if (!v.is_array()) {
    throw BackendError(Kind::kProtocol, std::string(key) + " must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw BackendError(Kind::kProtocol,
                         std::string(key) + " entries must be strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::uint64_t Unsigned(const json& obj, const char* key) {
  const json& v = Member(obj, key);
  if (!v.is_number_unsigned()) {
    throw BackendError(Kind::kProtocol,
                       std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string Dump(const ordered_json& value) {
  return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

std::string EncodeInfillRequest(const InfillRequest& request) {
  ordered_json decode;
  decode["strategy"] = DecodeStrategyName(request.decode.strategy);
  decode["top_k"] = request.decode.top_k;
  decode["beam_size"] = request.decode.beam_size;
  decode["seed"] = request.decode.seed;
  ordered_json body;
  body["text_with_sentinels"] = request.text_with_sentinels;
  body["blank_count"] = request.blank_count;
  body["decode"] = std::move(decode);
  return Dump(body);
}

InfillRequest DecodeInfillRequest(std::string_view body) {
  const json j = Parse(body);
  InfillRequest request;
  request.text_with_sentinels = String(j, "text_with_sentinels");
  request.blank_count = Unsigned(j, "blank_count");
  const json& decode = Member(j, "decode");
  if (!decode.is_object()) {
    throw BackendError(Kind::kProtocol, "decode must be an object");
  }
  try {
    request.decode.strategy = ParseDecodeStrategy(String(decode, "strategy"));
  } catch (const std::invalid_argument& e) {
    throw BackendError(Kind::kProtocol, e.what());
  }
  request.decode.top_k = static_cast<int>(Unsigned(decode, "top_k"));
  request.decode.beam_size = static_cast<int>(Unsigned(decode, "beam_size"));
  request.decode.seed = Unsigned(decode, "seed");
  return request;
}

std::string EncodeInfillResponse(const InfillResponse& response) {
  ordered_json body;
  body["fills"] = response.fills;
  return Dump(body);
}

InfillResponse DecodeInfillResponse(std::string_view body) {
  return InfillResponse{Strings(Parse(body), "fills")};
}

std::string EncodeClassifyRequest(const ClassifyRequest& request) {
  ordered_json body;
  body["task_id"] = request.task_id;
  body["rendered_inputs"] = request.rendered_inputs;
  body["labels"] = request.labels;
  return Dump(body);
}

ClassifyRequest DecodeClassifyRequest(std::string_view body) {
  const json j = Parse(body);
  return ClassifyRequest{String(j, "task_id"), Strings(j, "rendered_inputs"),
                         Strings(j, "labels")};
}

std::string EncodeClassifyResponse(const ClassifyResponse& response) {
  ordered_json body;
  body["probs"] = response.probs;
  return Dump(body);
}

ClassifyResponse DecodeClassifyResponse(std::string_view body) {
  const json j = Parse(body);
  const json& probs = Member(j, "probs");
  if (!probs.is_array()) {
    throw BackendError(Kind::kProtocol, "probs must be an array");
  }
  ClassifyResponse response;
  for (const auto& vec : probs) {
    if (!vec.is_array()) {
      throw BackendError(Kind::kProtocol, "probs entries must be arrays");
    }
    std::vector<double> row;
    for (const auto& p : vec) {
      if (!p.is_number()) {
        throw BackendError(Kind::kProtocol, "probabilities must be numbers");
      }
      row.push_back(p.get<double>());
    }
    response.probs.push_back(std::move(row));
  }
  return response;
}

std::string EncodeTranslateRequest(const TranslateRequest& request) {
  ordered_json body;
  body["texts"] = request.texts;
  body["src"] = request.src;
  body["tgt"] = request.tgt;
  return Dump(body);
}

TranslateRequest DecodeTranslateRequest(std::string_view body) {
  const json j = Parse(body);
  return TranslateRequest{Strings(j, "texts"), String(j, "src"),
                          String(j, "tgt")};
}

std::string EncodeTranslateResponse(const TranslateResponse& response) {
  ordered_json body;
  body["texts"] = response.texts;
  return Dump(body);
}

TranslateResponse DecodeTranslateResponse(std::string_view body) {
  return TranslateResponse{Strings(Parse(body), "texts")};
}

}  // namespace wire

}  // namespace flipda
