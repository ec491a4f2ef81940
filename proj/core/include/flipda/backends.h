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

// Model-service interfaces: blank infilling, label classification and
// translation.
//
// Each interface validates requests before dispatch and responses after, so
// callers only ever see a fully valid response or a BackendError.

#ifndef FLIPDA_BACKENDS_H_
#define FLIPDA_BACKENDS_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace flipda {

enum class DecodeStrategy { kGreedy, kSample, kBeam };

const char* DecodeStrategyName(DecodeStrategy strategy);
// Accepts "greedy", "sample", "beam"; throws std::invalid_argument.
DecodeStrategy ParseDecodeStrategy(std::string_view name);

struct DecodeParams {
  DecodeStrategy strategy = DecodeStrategy::kGreedy;
  int top_k = 15;
  int beam_size = 10;
  std::uint64_t seed = 0;

  bool operator==(const DecodeParams&) const = default;
};

// Blanks are written as "[BLANK_i]", numbered left to right from 0.
std::string BlankSentinel(std::size_t index);

struct InfillRequest {
  std::string text_with_sentinels;
  std::size_t blank_count = 0;
  DecodeParams decode;

  bool operator==(const InfillRequest&) const = default;
};

struct InfillResponse {
  std::vector<std::string> fills;

  bool operator==(const InfillResponse&) const = default;
};

struct ClassifyRequest {
  std::string task_id;
  std::vector<std::string> rendered_inputs;
  std::vector<std::string> labels;

  bool operator==(const ClassifyRequest&) const = default;
};

struct ClassifyResponse {
  std::vector<std::vector<double>> probs;

  bool operator==(const ClassifyResponse&) const = default;
};

struct TranslateRequest {
  std::vector<std::string> texts;
  std::string src;
  std::string tgt;

  bool operator==(const TranslateRequest&) const = default;
};

struct TranslateResponse {
  std::vector<std::string> texts;

  bool operator==(const TranslateResponse&) const = default;
};

// Throws BackendError(kPrecondition) unless each of [BLANK_0] ..
// [BLANK_{blank_count-1}] occurs exactly once and no other index occurs.
void ValidateInfillRequest(const InfillRequest& request);

// Checks shape and sign, then rescales each vector to sum to 1. Throws
// BackendError(kDimensionMismatch) on wrong counts or lengths and
// BackendError(kProtocol) on negative, non-finite or all-zero vectors.
void NormalizeClassifyResponse(const ClassifyRequest& request,
                               ClassifyResponse& response);

class InfillBackend {
 public:
  virtual ~InfillBackend() = default;

  InfillResponse Infill(const InfillRequest& request);

 protected:
  virtual InfillResponse DoInfill(const InfillRequest& request) = 0;
};

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;

  ClassifyResponse Classify(const ClassifyRequest& request);

 protected:
  virtual ClassifyResponse DoClassify(const ClassifyRequest& request) = 0;
};

class TranslatorBackend {
 public:
  virtual ~TranslatorBackend() = default;

  TranslateResponse Translate(const TranslateRequest& request);

 protected:
  virtual TranslateResponse DoTranslate(const TranslateRequest& request) = 0;
};

struct BackendConfig {
  // "stub" (or "stub:<name>") selects an in-process stub; anything else is
  // an http:// base URL.
  std::string endpoint = "stub";
  std::chrono::milliseconds timeout{30000};
  int max_parallel = 4;
  int retries = 3;
  std::chrono::milliseconds backoff_base{250};

  bool IsStub() const;
  // Throws std::invalid_argument.
  void Validate() const;
};

// JSON bodies of the HTTP protocol (POST /infill, /classify, /translate).
// Decoders throw BackendError(kProtocol) on schema violations.
namespace wire {

std::string EncodeInfillRequest(const InfillRequest& request);
InfillRequest DecodeInfillRequest(std::string_view body);
std::string EncodeInfillResponse(const InfillResponse& response);
InfillResponse DecodeInfillResponse(std::string_view body);

std::string EncodeClassifyRequest(const ClassifyRequest& request);
ClassifyRequest DecodeClassifyRequest(std::string_view body);
std::string EncodeClassifyResponse(const ClassifyResponse& response);
ClassifyResponse DecodeClassifyResponse(std::string_view body);

std::string EncodeTranslateRequest(const TranslateRequest& request);
TranslateRequest DecodeTranslateRequest(std::string_view body);
std::string EncodeTranslateResponse(const TranslateResponse& response);
TranslateResponse DecodeTranslateResponse(std::string_view body);

}  // namespace wire

}  // namespace flipda

#endif  // FLIPDA_BACKENDS_H_
