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

#include "flipda/http_backends.h"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "flipda/error.h"
#include "httplib.h"

namespace flipda {

namespace {

using Kind = BackendError::Kind;

struct Endpoint {
  std::string scheme_host_port;
  std::string base_path;
};

Endpoint SplitEndpoint(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw std::invalid_argument("expected http:// endpoint: " + url);
  }
  const auto slash = url.find('/', kScheme.size());
  if (slash == std::string::npos) return {url, ""};
  std::string base = url.substr(slash);
  while (!base.empty() && base.back() == '/') base.pop_back();
  return {url.substr(0, slash), base};
}

}  // namespace

class HttpTransport::Limiter {
 public:
  explicit Limiter(int slots) : free_(slots) {}

  void Acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [this] { return free_ > 0; });
    --free_;
  }

  void Release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int free_;
};

HttpTransport::HttpTransport(BackendConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  if (config_.IsStub()) {
    throw std::invalid_argument("HTTP transport needs an http:// endpoint");
  }
  limiter_ = std::make_unique<Limiter>(config_.max_parallel);
}

HttpTransport::~HttpTransport() = default;

std::string HttpTransport::Post(std::string_view path,
                                const std::string& body) {
  const Endpoint endpoint = SplitEndpoint(config_.endpoint);
  const std::string full_path = endpoint.base_path + std::string(path);

  struct Slot {
    Limiter& limiter;
    explicit Slot(Limiter& l) : limiter(l) { limiter.Acquire(); }
    ~Slot() { limiter.Release(); }
  } slot(*limiter_);

  const auto timeout = config_.timeout;
  BackendError last(Kind::kTransport, "no attempt made");
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config_.backoff_base *
                                  (1LL << (attempt - 1)));
    }
    httplib::Client client(endpoint.scheme_host_port);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(full_path, body, "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - started;

    if (!result) {
      const auto error = result.error();
      const bool timed_out =
          error == httplib::Error::ConnectionTimeout ||
          (error == httplib::Error::Read && elapsed >= timeout * 9 / 10);
      last =
          BackendError(timed_out ? Kind::kTimeout : Kind::kTransport,
                       "POST " + full_path + ": " + httplib::to_string(error));
      continue;
    }
    if (result->status == 200) return result->body;
    last = BackendError(Kind::kTransport, "POST " + full_path + ": HTTP " +
                                              std::to_string(result->status));
    if (result->status < 500) break;
  }
  throw last;
}

InfillResponse HttpInfillClient::DoInfill(const InfillRequest& request) {
  return wire::DecodeInfillResponse(
      transport_.Post("/infill", wire::EncodeInfillRequest(request)));
}

ClassifyResponse HttpClassifierClient::DoClassify(
    const ClassifyRequest& request) {
  return wire::DecodeClassifyResponse(
      transport_.Post("/classify", wire::EncodeClassifyRequest(request)));
}

TranslateResponse HttpTranslatorClient::DoTranslate(
    const TranslateRequest& request) {
  return wire::DecodeTranslateResponse(
      transport_.Post("/translate", wire::EncodeTranslateRequest(request)));
}

}  // namespace flipda
