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

#ifndef FLIPDA_TOOLS_CLI_CLI_H_
#define FLIPDA_TOOLS_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace flipda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitBackendError = 2;
inline constexpr int kExitInternalError = 3;

// Runs the flipda command line. `args` excludes the program name. Summaries
// go to `out`, structured logs and error messages to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace flipda::cli

#endif  // FLIPDA_TOOLS_CLI_CLI_H_
