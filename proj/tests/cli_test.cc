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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/fixtures.h"

namespace flipda::testing {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<json> ReadJsonl(const fs::path& path) {
  std::vector<json> out;
  std::istringstream in(ReadText(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

fs::path WriteConfig(const ScratchDir& dir, const json& doc) {
  const fs::path path = dir / "config.json";
  WriteText(path, doc.dump(2));
  return path;
}

json BoolqConfig(const ScratchDir& dir) {
  std::string data;
  const char* questions[] = {"is the sky blue", "is fire cold", "can birds fly",
                             "is ice hot"};
  for (int i = 0; i < 4; ++i) {
    json ex = {{"idx", i},
               {"question", questions[i]},
               {"passage", "A short passage about question number " +
                               std::to_string(i) + " and its answer."},
               {"label", i % 2 == 0}};
    data += ex.dump() + "\n";
  }
  WriteText(dir / "boolq.jsonl", data);
  return {{"task", "boolq"},
          {"train", "boolq.jsonl"},
          {"output_dir", "out"},
          {"seed", 3},
          {"fill", {{"n_candidates", 2}}}};
}

TEST(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(RunFlipda({"--help"}).code, 0);
  EXPECT_EQ(RunFlipda({}).code, 1);
  EXPECT_EQ(RunFlipda({"frobnicate"}).code, 1);
  EXPECT_EQ(RunFlipda({"--stub", "augment"}).code, 1);
}

TEST(CliTest, UnknownConfigKeyIsRejected) {
  ScratchDir dir("cli_keys");
  const auto config = WriteRteConfig(dir.path(), "\"colour\": \"blue\"");
  const CliRun run =
      RunFlipda({"--config", config.string(), "--stub", "augment"});
  EXPECT_EQ(run.code, 1);
  EXPECT_NE(run.err.find("colour"), std::string::npos);
}

TEST(CliTest, AugmentThenSelectOnRte) {
  ScratchDir dir("cli_rte");
  const auto config = WriteRteConfig(dir.path()).string();
  const CliRun aug = RunFlipda({"--config", config, "--stub", "augment"});
  ASSERT_EQ(aug.code, 0) << aug.err;
  const auto candidates = ReadJsonl(dir / "out/candidates.jsonl");
  EXPECT_GT(candidates.size(), 0u);
  EXPECT_LE(candidates.size(), 640u);
  EXPECT_NE(aug.out.find("candidates: " + std::to_string(candidates.size())),
            std::string::npos);

  const CliRun sel = RunFlipda({"--config", config, "--stub", "select"});
  ASSERT_EQ(sel.code, 0) << sel.err;
  const auto selection = ReadJsonl(dir / "out/selection.jsonl");
  const auto train = ReadJsonl(dir / "out/train_augmented.jsonl");
  EXPECT_EQ(train.size(), 32 + selection.size());
  for (const auto& s : selection) {
    const std::string label = s.at("assigned_label");
    EXPECT_TRUE(label == "entailment" || label == "not_entailment");
  }
}

TEST(CliTest, GlobalTopPKeepsOnlyConfidentCandidates) {
  ScratchDir dir("cli_topp");
  const auto config =
      WriteRteConfig(
          dir.path(),
          "\"selection\": {\"strategy\": \"global_topp\", "
          "\"p_threshold\": 0.95, \"require_label_agreement\": false}")
          .string();
  ASSERT_EQ(RunFlipda({"--config", config, "--stub", "augment"}).code, 0);
  const CliRun sel = RunFlipda({"--config", config, "--stub", "select"});
  ASSERT_EQ(sel.code, 0) << sel.err;
  for (const auto& s : ReadJsonl(dir / "out/selection.jsonl")) {
    EXPECT_GE(s.at("p_assigned").get<double>(), 0.95);
  }
}

TEST(CliTest, BaselineMixSize) {
  ScratchDir dir("cli_sr");
  const auto config = WriteRteConfig(dir.path(), "\"method\": \"sr\"").string();
  ASSERT_EQ(RunFlipda({"--config", config, "--stub", "augment"}).code, 0);
  const CliRun sel = RunFlipda({"--config", config, "--stub", "select"});
  ASSERT_EQ(sel.code, 0) << sel.err;
  EXPECT_EQ(ReadJsonl(dir / "out/train_augmented.jsonl").size(), 640u);
  EXPECT_NE(sel.out.find("= 640 examples"), std::string::npos);
}

TEST(CliTest, EmptyDatasetGivesEmptyCache) {
  ScratchDir dir("cli_empty");
  WriteText(dir / "empty.jsonl", "");
  json doc = {{"task", "rte"}, {"train", "empty.jsonl"}, {"output_dir", "out"}};
  const auto config = WriteConfig(dir, doc).string();
  const CliRun run = RunFlipda({"--config", config, "--stub", "augment"});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(ReadText(dir / "out/candidates.jsonl"), "");
}

TEST(CliTest, DisallowedFlipIsAUserError) {
  ScratchDir dir("cli_wsc");
  WriteText(dir / "wsc.jsonl",
            R"({"idx":0,"text":"Mark told Pete he was late.","target":)"
            R"({"span1_text":"Pete","span2_text":"he"},"label":true})"
            "\n");
  json doc = {{"task", "wsc"},
              {"train", "wsc.jsonl"},
              {"output_dir", "out"},
              {"fill", {{"mask_ratio", 0.3}}},
              {"targets", {"false"}}};
  const CliRun run = RunFlipda(
      {"--config", WriteConfig(dir, doc).string(), "--stub", "augment"});
  EXPECT_EQ(run.code, 1);
}

TEST(CliTest, SelectRejectsUnknownSource) {
  ScratchDir dir("cli_ghost");
  const auto config = WriteRteConfig(dir.path()).string();
  json record = {{"source_id", "ghost"},
                 {"fields", {{"premise", "p"}, {"hypothesis", "h"}}},
                 {"intended_label", "entailment"},
                 {"generation",
                  {{"method", "flipda"},
                   {"mask_ratio", 0.5},
                   {"decode", "greedy"},
                   {"fill_strategy", "default"},
                   {"seed", 1}}},
                 {"consistency_ok", true}};
  WriteText(dir / "cache.jsonl", record.dump() + "\n");
  const CliRun run = RunFlipda({"--config", config, "--stub", "select",
                                "--cache", (dir / "cache.jsonl").string()});
  EXPECT_EQ(run.code, 1);
  EXPECT_NE(run.err.find("ghost"), std::string::npos);
}

TEST(CliTest, OutOfSpaceRatioNeedsUnsafeFlag) {
  ScratchDir dir("cli_unsafe");
  const auto config =
      WriteRteConfig(dir.path(), "\"fill\": {\"mask_ratio\": 0.7}").string();
  EXPECT_EQ(RunFlipda({"--config", config, "--stub", "augment"}).code, 1);
  EXPECT_EQ(
      RunFlipda({"--config", config, "--stub", "--unsafe-params", "augment"})
          .code,
      0);
}

TEST(CliTest, EvaluateCellsReproducesPublishedTable) {
  ScratchDir dir("cli_eval");
  const CliRun run = RunFlipda({"--output", dir.path().string(), "evaluate",
                                "--cells", CellsPath("albert").string()});
  ASSERT_EQ(run.code, 0) << run.err;
  for (const auto& row : PublishedRows("albert")) {
    EXPECT_NE(run.out.find(row.method), std::string::npos);
  }
  EXPECT_NE(run.out.find("74.63"), std::string::npos);
  const CliRun again = RunFlipda({"--output", dir.path().string(), "report"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.out, run.out);
  EXPECT_EQ(ReadText(dir / "report.txt"), run.out);
}

TEST(CliTest, EvaluateRejectsMismatchedTasks) {
  ScratchDir dir("cli_mismatch");
  WriteText(dir / "cells.jsonl",
            R"({"method":"Baseline","task":"rte","metric":"acc","value":60})"
            "\n"
            R"({"method":"Baseline","task":"cb","metric":"acc","value":70})"
            "\n"
            R"({"method":"FlipDA","task":"rte","metric":"acc","value":65})"
            "\n");
  EXPECT_EQ(RunFlipda({"--output", dir.path().string(), "evaluate", "--cells",
                       (dir / "cells.jsonl").string()})
                .code,
            1);
}

TEST(CliTest, EvaluatePredictions) {
  ScratchDir dir("cli_preds");
  std::string preds;
  for (int i = 0; i < 32; ++i) {
    const std::string gold = i < 16 ? "entailment" : "not_entailment";
    preds += json{{"method", "Baseline"},
                  {"task", "rte"},
                  {"id", i},
                  {"pred", i < 24 ? "entailment" : "not_entailment"}}
                 .dump() +
             "\n";
    preds +=
        json{{"method", "FlipDA"}, {"task", "rte"}, {"id", i}, {"pred", gold}}
            .dump() +
        "\n";
  }
  WriteText(dir / "preds.jsonl", preds);
  const CliRun run =
      RunFlipda({"--output", dir.path().string(), "evaluate", "--predictions",
                 (dir / "preds.jsonl").string(), "--gold",
                 "rte=" + DataPath("rte_32.jsonl").string()});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("75.00"), std::string::npos);
  EXPECT_NE(run.out.find("100.00"), std::string::npos);
  EXPECT_EQ(RunFlipda({"--output", dir.path().string(), "evaluate",
                       "--predictions", (dir / "preds.jsonl").string()})
                .code,
            1);
}

TEST(CliTest, SweepGrid) {
  ScratchDir dir("cli_sweep");
  json doc = BoolqConfig(dir);
  CliRun run = RunFlipda(
      {"--config", WriteConfig(dir, doc).string(), "--stub", "sweep"});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("6 runs"), std::string::npos);
  EXPECT_EQ(ReadJsonl(dir / "out/sweep.jsonl").size(), 6u);

  doc["sweep"] = {{"mask_ratio", {0.5}}, {"decode", {"greedy"}}};
  run = RunFlipda(
      {"--config", WriteConfig(dir, doc).string(), "--stub", "sweep"});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("1 runs"), std::string::npos);
  EXPECT_TRUE(
      fs::exists(dir / "out/mr0.5_greedy_default_auto/selection.jsonl"));

  doc["sweep"] = {{"mask_ratio", {0.7}}};
  const auto path = WriteConfig(dir, doc).string();
  EXPECT_EQ(RunFlipda({"--config", path, "--stub", "sweep"}).code, 1);
  EXPECT_EQ(
      RunFlipda({"--config", path, "--stub", "--unsafe-params", "sweep"}).code,
      0);
}

TEST(CliTest, RerunsAreByteIdentical) {
  ScratchDir a("cli_det_a"), b("cli_det_b");
  for (const ScratchDir* dir : {&a, &b}) {
    const auto config = WriteRteConfig(dir->path()).string();
    ASSERT_EQ(RunFlipda({"--config", config, "--stub", "augment"}).code, 0);
    ASSERT_EQ(RunFlipda({"--config", config, "--stub", "select"}).code, 0);
  }
  for (const char* name :
       {"candidates.jsonl", "selection.jsonl", "train_augmented.jsonl"}) {
    EXPECT_EQ(ReadText(a / (std::string("out/") + name)),
              ReadText(b / (std::string("out/") + name)))
        << name;
  }
}

TEST(CliTest, SeedOverrideChangesCandidates) {
  ScratchDir dir("cli_seed");
  const auto config = WriteRteConfig(dir.path()).string();
  ASSERT_EQ(RunFlipda({"--config", config, "--stub", "augment"}).code, 0);
  const std::string first = ReadText(dir / "out/candidates.jsonl");
  ASSERT_EQ(
      RunFlipda({"--config", config, "--seed", "8", "--stub", "augment"}).code,
      0);
  EXPECT_NE(ReadText(dir / "out/candidates.jsonl"), first);
}

}  // namespace
}  // namespace flipda::testing
