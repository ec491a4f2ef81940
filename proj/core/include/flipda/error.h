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

#ifndef FLIPDA_ERROR_H_
#define FLIPDA_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flipda {

// Base of every error the library raises on bad input or failed services.
// Violated internal invariants use std::logic_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dataset and candidate-cache I/O.
class CorpusError : public Error {
 public:
  enum class Kind {
    kMissingField,
    kUnknownLabel,
    kDuplicateId,
    kMalformedLine,
    kIo,
  };

  // `line` is 1-based; 0 when the error is not tied to a line.
  CorpusError(Kind kind, std::size_t line, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

const char* CorpusErrorKindName(CorpusError::Kind kind);

// Model-service failures. Never raised for a partially valid response: a
// response either validates completely or one of these is thrown.
class BackendError : public Error {
 public:
  enum class Kind {
    kTimeout,
    kTransport,
    kBlankCountMismatch,
    kDimensionMismatch,
    kPrecondition,
    kProtocol,
    kUnsupportedLanguagePair,
  };

  BackendError(Kind kind, const std::string& message);

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* BackendErrorKindName(BackendError::Kind kind);

class ClozeError : public Error {
 public:
  enum class Kind {
    kFlipNotAllowed,
    kMissingChoices,
    kMissingEntities,
    kInvalidArgument,
  };

  ClozeError(Kind kind, const std::string& message);

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SelectError : public Error {
 public:
  enum class Kind { kUnknownSource, kInvalidConfig };

  SelectError(Kind kind, const std::string& message);

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class EvalError : public Error {
 public:
  enum class Kind { kLengthMismatch, kEmpty, kTaskMismatch, kInvalidArgument };

  EvalError(Kind kind, const std::string& message);

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace flipda

#endif  // FLIPDA_ERROR_H_
