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

#ifndef FLIPDA_HTTP_BACKENDS_H_
#define FLIPDA_HTTP_BACKENDS_H_

#include <memory>
#include <string>
#include <string_view>

#include "flipda/backends.h"

namespace flipda {

// Blocking JSON-over-HTTP transport shared by the three clients.
//
// At most `max_parallel` requests are in flight per transport; further
// callers block. Failed attempts (connection errors, timeouts, 5xx) are
// retried up to `retries` times with exponential backoff starting at
// `backoff_base` and doubling each attempt. Backends must therefore be
// idempotent. 4xx responses are not retried.
class HttpTransport {
 public:
  explicit HttpTransport(BackendConfig config);
  ~HttpTransport();

  HttpTransport(const HttpTransport&) = delete;
  HttpTransport& operator=(const HttpTransport&) = delete;

  // POSTs `body` to `path` and returns the 200 response body.
  std::string Post(std::string_view path, const std::string& body);

  const BackendConfig& config() const { return config_; }

 private:
  class Limiter;

  BackendConfig config_;
  std::unique_ptr<Limiter> limiter_;
};

class HttpInfillClient : public InfillBackend {
 public:
  explicit HttpInfillClient(BackendConfig config) : transport_(config) {}

 protected:
  InfillResponse DoInfill(const InfillRequest& request) override;

 private:
  HttpTransport transport_;
};

class HttpClassifierClient : public ClassifierBackend {
 public:
  explicit HttpClassifierClient(BackendConfig config) : transport_(config) {}

 protected:
  ClassifyResponse DoClassify(const ClassifyRequest& request) override;

 private:
  HttpTransport transport_;
};

class HttpTranslatorClient : public TranslatorBackend {
 public:
  explicit HttpTranslatorClient(BackendConfig config) : transport_(config) {}

 protected:
  TranslateResponse DoTranslate(const TranslateRequest& request) override;

 private:
  HttpTransport transport_;
};

}  // namespace flipda

#endif  // FLIPDA_HTTP_BACKENDS_H_
