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

#ifndef FLIPDA_TESTS_SUPPORT_FIXTURES_H_
#define FLIPDA_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flipda/corpus.h"

namespace flipda::testing {

std::filesystem::path DataPath(const std::string& name);
std::string ReadText(const std::filesystem::path& path);
void WriteText(const std::filesystem::path& path, const std::string& text);

// Fresh empty directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag);
  ~ScratchDir();

  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

Dataset LoadRte32();

struct PublishedRow {
  std::string method;
  double avg = 0.0;
  std::optional<double> md;
};

// Published summary columns of the ALBERT ("albert") or DeBERTa
// ("deberta") table, in row order.
std::vector<PublishedRow> PublishedRows(const std::string& table);
std::filesystem::path CellsPath(const std::string& table);

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun RunFlipda(const std::vector<std::string>& args);

// Writes a JSON config for the RTE fixture into `dir` and returns its path.
// `extra` is spliced into the top-level object (e.g. "\"seed\": 3").
std::filesystem::path WriteRteConfig(const std::filesystem::path& dir,
                                     const std::string& extra = "");

}  // namespace flipda::testing

#endif  // FLIPDA_TESTS_SUPPORT_FIXTURES_H_
