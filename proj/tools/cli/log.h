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

#ifndef FLIPDA_TOOLS_CLI_LOG_H_
#define FLIPDA_TOOLS_CLI_LOG_H_

#include <mutex>
#include <ostream>
#include <string_view>

#include "json.hpp"

namespace flipda::cli {

// One JSON object per line: {"level", "event", ...fields}.
class Logger {
 public:
  explicit Logger(std::ostream& sink) : sink_(sink) {}

  void Log(std::string_view level, std::string_view event,
           const nlohmann::ordered_json& fields = nlohmann::ordered_json());
  void Info(std::string_view event,
            const nlohmann::ordered_json& fields = nlohmann::ordered_json()) {
    Log("info", event, fields);
  }
  void Warn(std::string_view event,
            const nlohmann::ordered_json& fields = nlohmann::ordered_json()) {
    Log("warn", event, fields);
  }
  void Error(std::string_view event,
             const nlohmann::ordered_json& fields = nlohmann::ordered_json()) {
    Log("error", event, fields);
  }

 private:
  std::ostream& sink_;
  std::mutex mu_;
};

}  // namespace flipda::cli

#endif  // FLIPDA_TOOLS_CLI_LOG_H_
