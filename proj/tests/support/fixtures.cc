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

#include "support/fixtures.h"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cli.h"
#include "flipda/task.h"
#include "json.hpp"

namespace flipda::testing {

namespace fs = std::filesystem;

fs::path DataPath(const std::string& name) {
  return fs::path(FLIPDA_TEST_DATA_DIR) / name;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ScratchDir::ScratchDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("flipda_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Dataset LoadRte32() {
  return LoadDataset(DataPath("rte_32.jsonl"), BuiltinTask("rte"));
}

std::vector<PublishedRow> PublishedRows(const std::string& table) {
  const auto doc = nlohmann::json::parse(ReadText(DataPath("published.json")));
  // Row order follows the cell file.
  std::vector<std::string> order;
  std::ifstream cells(CellsPath(table));
  std::string line;
  while (std::getline(cells, line)) {
    const auto m = nlohmann::json::parse(line).at("method").get<std::string>();
    if (order.empty() || order.back() != m) order.push_back(m);
  }
  std::vector<PublishedRow> rows;
  for (const auto& method : order) {
    const auto& entry = doc.at(table).at(method);
    PublishedRow row{method, entry.at("avg").get<double>(), std::nullopt};
    if (!entry.at("md").is_null()) row.md = entry.at("md").get<double>();
    rows.push_back(row);
  }
  return rows;
}

fs::path CellsPath(const std::string& table) {
  return DataPath(table + "_cells.jsonl");
}

CliRun RunFlipda(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun run;
  run.code = cli::RunCli(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

fs::path WriteRteConfig(const fs::path& dir, const std::string& extra) {
  nlohmann::json doc = {
      {"task", "rte"},
      {"train", DataPath("rte_32.jsonl").string()},
      {"output_dir", (dir / "out").string()},
      {"seed", 7},
      {"fill",
       {{"mask_ratio", 0.5}, {"decode", "greedy"}, {"n_candidates", 10}}},
      {"stub", {{"classifier_weights", DataPath("rte_weights.tsv").string()}}},
      {"lexicon",
       {{"synonyms", DataPath("synonyms.tsv").string()},
        {"embeddings", DataPath("embeddings.txt").string()},
        {"stopwords", DataPath("stopwords.txt").string()}}},
  };
  std::string text = doc.dump(2);
  if (!extra.empty()) {
    text.insert(text.rfind('}'), ",\n  " + extra + "\n");
  }
  const fs::path path = dir / "config.json";
  WriteText(path, text);
  return path;
}

}  // namespace flipda::testing
