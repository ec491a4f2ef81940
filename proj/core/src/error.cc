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

#include "flipda/error.h"

namespace flipda {

namespace {

std::string WithLine(std::size_t line, const std::string& message) {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

CorpusError::CorpusError(Kind kind, std::size_t line,
                         const std::string& message)
    : Error(std::string(CorpusErrorKindName(kind)) + ": " +
            WithLine(line, message)),
      kind_(kind),
      line_(line) {}

const char* CorpusErrorKindName(CorpusError::Kind kind) {
  switch (kind) {
    case CorpusError::Kind::kMissingField:
      return "missing-field";
    case CorpusError::Kind::kUnknownLabel:
      return "unknown-label";
    case CorpusError::Kind::kDuplicateId:
      return "duplicate-id";
    case CorpusError::Kind::kMalformedLine:
      return "malformed-line";
    case CorpusError::Kind::kIo:
      return "io";
  }
  return "unknown";
}

BackendError::BackendError(Kind kind, const std::string& message)
    : Error(std::string(BackendErrorKindName(kind)) + ": " + message),
      kind_(kind) {}

const char* BackendErrorKindName(BackendError::Kind kind) {
  switch (kind) {
    case BackendError::Kind::kTimeout:
      return "timeout";
    case BackendError::Kind::kTransport:
      return "transport";
    case BackendError::Kind::kBlankCountMismatch:
      return "blank-count-mismatch";
    case BackendError::Kind::kDimensionMismatch:
      return "dimension-mismatch";
    case BackendError::Kind::kPrecondition:
      return "precondition";
    case BackendError::Kind::kProtocol:
      return "protocol";
    case BackendError::Kind::kUnsupportedLanguagePair:
      return "unsupported-language-pair";
  }
  return "unknown";
}

ClozeError::ClozeError(Kind kind, const std::string& message)
    : Error(message), kind_(kind) {}

SelectError::SelectError(Kind kind, const std::string& message)
    : Error(message), kind_(kind) {}

EvalError::EvalError(Kind kind, const std::string& message)
    : Error(message), kind_(kind) {}

}  // namespace flipda
