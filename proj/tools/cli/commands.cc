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

#include "commands.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "baselines.h"
#include "flipda/cloze.h"
#include "flipda/error.h"
#include "flipda/evalkit.h"
#include "flipda/http_backends.h"
#include "flipda/lexops.h"
#include "flipda/stubs.h"
#include "flipda/util.h"

namespace flipda::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!StripWhitespace(line).empty()) lines.push_back(line);
  }
  return lines;
}

void WriteText(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string Percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? "0.00" : FormatScore(100.0 * part / whole);
}

const TaskSpec& ConfiguredTask(const RunConfig& config) {
  try {
    return BuiltinTask(config.task_id);
  } catch (const std::exception&) {
    throw ConfigError("unknown task " + config.task_id);
  }
}

Dataset LoadTrain(const RunConfig& config, const TaskSpec& task) {
  if (config.train.empty()) throw ConfigError("no training set configured");
  return LoadDataset(config.train, task);
}

std::unique_ptr<LexiconIndex> LoadLexicon(const LexiconSettings& s) {
  if (!s.synonyms && !s.embeddings && !s.stopwords) return nullptr;
  auto lex = std::make_unique<LexiconIndex>();
  if (s.synonyms) lex->LoadSynonyms(*s.synonyms);
  if (s.embeddings) lex->LoadEmbeddings(*s.embeddings);
  if (s.stopwords) lex->LoadStopwords(*s.stopwords);
  return lex;
}

std::vector<std::string> TargetsFor(const RunConfig& config,
                                    const TaskSpec& task, const Example& ex) {
  if (config.targets) return *config.targets;
  std::vector<std::string> out;
  for (const auto& label : task.label_set.labels()) {
    if (task.AllowsTarget(ex.label, label)) out.push_back(label);
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first failure
// in index order is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn fn) {
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t count =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < count; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

void PrintCounts(std::ostream& out,
                 const std::map<Direction, std::size_t>& counts,
                 const TaskSpec& task) {
  for (const auto& d : AllDirections(task)) {
    auto it = counts.find(d);
    out << "  " << d.Name() << ": " << (it == counts.end() ? 0 : it->second)
        << "\n";
  }
}

ordered_json CountsJson(const std::map<Direction, std::size_t>& counts) {
  ordered_json j = ordered_json::object();
  for (const auto& [d, n] : counts) j[d.Name()] = n;
  return j;
}

void WriteSelection(const fs::path& dir, const TaskSpec& task,
                    const SelectOutcome& outcome) {
  std::vector<CandidateRecord> records;
  std::vector<CandidateAnnotation> notes;
  for (const auto& s : outcome.result.selected) {
    records.push_back(s.candidate);
    notes.push_back({s.assigned_label, s.p_assigned});
  }
  fs::create_directories(dir);
  SaveAnnotatedCandidates(dir / kSelectionFile, records, notes);
  SaveDataset(dir / kTrainFile, outcome.train, task);
}

std::string LabelString(const nlohmann::json& value) {
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_string()) return value.get<std::string>();
  throw ConfigError("prediction must be a string, integer or boolean");
}

std::vector<MethodRun> RunsFromPredictions(
    const std::vector<fs::path>& files,
    const std::map<std::string, fs::path>& gold) {
  // (method, task) -> id -> prediction, in first-seen order.
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>,
           std::map<std::string, std::string>>
      preds;
  for (const auto& file : files) {
    std::size_t line_no = 0;
    for (const auto& line : ReadLines(file)) {
      ++line_no;
      std::string method, task, id, pred;
      try {
        const auto j = nlohmann::json::parse(line);
        method = j.at("method").get<std::string>();
        task = j.at("task").get<std::string>();
        id = LabelString(j.at("id"));
        pred = LabelString(j.at("pred"));
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": " +
                          e.what());
      }
      const auto key = std::make_pair(method, task);
      if (!preds.count(key)) order.push_back(key);
      preds[key][id] = pred;
    }
  }

  std::map<std::string, Dataset> golds;
  std::vector<MethodRun> runs;
  for (const auto& key : order) {
    const auto& [method, task_id] = key;
    auto g = gold.find(task_id);
    if (g == gold.end()) throw ConfigError("no gold set for task " + task_id);
    const TaskSpec& task = BuiltinTask(task_id);
    if (!golds.count(task_id)) golds[task_id] = LoadDataset(g->second, task);
    auto run = std::find_if(runs.begin(), runs.end(),
                            [&](const auto& r) { return r.method == method; });
    if (run == runs.end()) {
      runs.push_back({method, {}});
      run = std::prev(runs.end());
    }
    run->tasks.push_back(ScoreTask(task, golds[task_id], preds[key]));
  }
  return runs;
}

std::vector<MethodRun> RunsFromCells(const std::vector<fs::path>& files) {
  std::string all;
  for (const auto& file : files) {
    for (const auto& line : ReadLines(file)) all += line + "\n";
  }
  std::istringstream in(all);
  return ParseCells(in);
}

int WriteReport(const RunConfig& config, const std::vector<MethodRun>& runs,
                const std::optional<std::string>& baseline, std::ostream& out,
                Logger& log) {
  const Report report =
      BuildReport(runs, baseline.value_or(config.baseline_method));
  const std::string text = RenderReportText(report);
  const std::string jsonl = RenderReportJsonl(report);
  WriteText(config.output_dir / kReportText, text);
  WriteText(config.output_dir / kReportJsonl, jsonl);
  out << text;
  log.Info("report.written",
           {{"methods", report.rows.size()},
            {"tasks", report.task_order.size()},
            {"path", (config.output_dir / kReportText).string()}});
  return 0;
}

}  // namespace

Services MakeServices(const RunConfig& config) {
  Services s;
  if (config.backend.IsStub()) {
    std::vector<std::string> lexicon = DefaultStubLexicon();
    if (config.stub.infill_lexicon) {
      lexicon.clear();
      for (const auto& line : ReadLines(*config.stub.infill_lexicon)) {
        lexicon.emplace_back(StripWhitespace(line));
      }
    }
    s.infill = std::make_unique<StubInfiller>(std::move(lexicon),
                                              config.stub.infill_seed);
    if (config.stub.classifier_weights) {
      s.classifier = std::make_unique<KeywordClassifier>(
          KeywordClassifier::FromFile(*config.stub.classifier_weights));
    } else {
      s.classifier = std::make_unique<KeywordClassifier>(
          std::vector<KeywordClassifier::Weight>{});
    }
    s.translator = std::make_unique<IdentityTranslator>();
    return s;
  }
  s.infill = std::make_unique<HttpInfillClient>(config.backend);
  s.classifier = std::make_unique<HttpClassifierClient>(config.backend);
  s.translator = std::make_unique<HttpTranslatorClient>(config.backend);
  return s;
}

AugmentOutcome Augment(const RunConfig& config, const TaskSpec& task,
                       const Dataset& dataset, Services& services) {
  const bool baseline = IsBaselineMethod(config.method);
  std::unique_ptr<LexiconIndex> lexicon;
  if (baseline) lexicon = LoadLexicon(config.lexicon);
  const BaselineContext context{&task, &config.baseline, lexicon.get(),
                                services.infill.get(),
                                services.translator.get()};

  std::vector<GenerationResult> per_example(dataset.size());
  ParallelFor(dataset.size(), config.backend.max_parallel, [&](std::size_t i) {
    const Example& ex = dataset[i];
    const std::uint64_t seed = SplitSeed(config.seed, ex.id);
    auto& slot = per_example[i];
    if (!baseline) {
      slot = GenerateCandidates(task, ex, TargetsFor(config, task, ex),
                                config.fill, *services.infill, seed, &dataset);
      return;
    }
    try {
      slot.records =
          AugmentWithBaseline(config.method, ex, context, seed, &slot.warnings);
    } catch (const BackendError& e) {
      slot.backend_failed = true;
      slot.errors.push_back(ex.id + ": " + e.what());
    }
  });

  AugmentOutcome outcome;
  std::map<std::string, std::string> source_label;
  for (const auto& ex : dataset) source_label[ex.id] = ex.label;
  for (auto& r : per_example) {
    outcome.backend_failed = outcome.backend_failed || r.backend_failed;
    outcome.degenerate += r.degenerate;
    for (auto& w : r.warnings) outcome.warnings.push_back(std::move(w));
    for (auto& e : r.errors) outcome.errors.push_back(std::move(e));
    for (auto& c : r.records) {
      ++outcome.counts[{source_label[c.source_id], c.intended_label}];
      outcome.consistent += c.consistency_ok;
      outcome.candidates.push_back(std::move(c));
    }
  }
  return outcome;
}

SelectOutcome SelectAndAssemble(const RunConfig& config, const TaskSpec& task,
                                const Dataset& dataset,
                                const std::vector<CandidateRecord>& candidates,
                                Services& services) {
  SelectOutcome outcome;
  if (IsBaselineMethod(config.method)) {
    outcome.baseline_mix = true;
    Dataset augmented;
    std::map<std::string, std::size_t> per_source;
    for (const auto& c : candidates) {
      auto idx = FindExample(dataset, c.source_id);
      if (!idx) {
        throw SelectError(SelectError::Kind::kUnknownSource,
                          "unknown source " + c.source_id);
      }
      const Example& source = dataset[*idx];
      const std::size_t n = per_source[source.id]++;
      augmented.push_back(CandidateToExample(
          c, source, c.intended_label,
          source.id + "#" + config.method + std::to_string(n)));
    }
    outcome.train =
        AssembleBaselineSet(dataset, augmented, config.baseline.copies);
    return outcome;
  }

  switch (config.agreement) {
    case AgreementMode::kAuto:
      outcome.require_label_agreement = ResolveLabelAgreement(candidates);
      break;
    case AgreementMode::kOn:
      outcome.require_label_agreement = true;
      break;
    case AgreementMode::kOff:
      outcome.require_label_agreement = false;
      break;
  }
  ScoreOptions options;
  options.batch_size = config.batch_size;
  options.drop_inconsistent =
      config.drop_inconsistent && outcome.require_label_agreement;
  const auto scored =
      ScoreCandidates(candidates, task, dataset, *services.classifier, options);
  SelectionConfig selection = config.selection;
  selection.require_label_agreement = outcome.require_label_agreement;
  outcome.result = Select(scored, task, dataset, selection);
  outcome.train = AssembleTrainingSet(dataset, outcome.result);
  return outcome;
}

int CmdAugment(const RunConfig& config, std::ostream& out, Logger& log) {
  ValidateRunConfig(config);
  const TaskSpec& task = ConfiguredTask(config);
  const Dataset dataset = LoadTrain(config, task);
  Services services = MakeServices(config);
  log.Info("augment.start", {{"task", task.task_id},
                             {"method", config.method},
                             {"examples", dataset.size()},
                             {"backend", config.backend.endpoint}});
  const AugmentOutcome outcome = Augment(config, task, dataset, services);
  for (const auto& w : outcome.warnings)
    log.Warn("augment.warning", {{"message", w}});
  for (const auto& e : outcome.errors)
    log.Error("augment.error", {{"message", e}});

  fs::create_directories(config.output_dir);
  SaveCandidates(config.output_dir / kCandidatesFile, outcome.candidates);

  const std::size_t n = outcome.candidates.size();
  out << "task " << task.task_id << ", method " << config.method << ", "
      << dataset.size() << " examples\n";
  out << "candidates: " << n << "\n";
  out << "consistency pass rate: " << Percent(outcome.consistent, n) << "% ("
      << outcome.consistent << "/" << n << ")\n";
  out << "per direction:\n";
  PrintCounts(out, outcome.counts, task);
  log.Info("augment.done",
           {{"candidates", n},
            {"consistent", outcome.consistent},
            {"degenerate", outcome.degenerate},
            {"directions", CountsJson(outcome.counts)},
            {"path", (config.output_dir / kCandidatesFile).string()}});
  return outcome.backend_failed ? 2 : 0;
}

int CmdSelect(const RunConfig& config, const std::optional<fs::path>& cache,
              std::ostream& out, Logger& log) {
  ValidateRunConfig(config);
  const TaskSpec& task = ConfiguredTask(config);
  const Dataset dataset = LoadTrain(config, task);
  const fs::path cache_path =
      cache.value_or(config.output_dir / kCandidatesFile);
  const auto candidates = LoadCandidates(cache_path);
  Services services = MakeServices(config);
  log.Info("select.start",
           {{"task", task.task_id},
            {"strategy", StrategyName(config.selection.strategy)},
            {"candidates", candidates.size()},
            {"cache", cache_path.string()}});
  const SelectOutcome outcome =
      SelectAndAssemble(config, task, dataset, candidates, services);
  WriteSelection(config.output_dir, task, outcome);

  if (outcome.baseline_mix) {
    out << "baseline mix: " << dataset.size() << " originals x "
        << config.baseline.copies << " + " << candidates.size()
        << " augmented = " << outcome.train.size() << " examples\n";
  } else {
    out << "strategy: " << StrategyName(config.selection.strategy) << "\n";
    out << "require_label_agreement: "
        << (outcome.require_label_agreement ? "true" : "false")
        << (config.agreement == AgreementMode::kAuto ? " (auto)" : "") << "\n";
    out << "selected: " << outcome.result.selected.size() << "\n";
    out << "skipped empty sets: " << outcome.result.skipped_empty_sets << "\n";
    out << "per direction:\n";
    PrintCounts(out, outcome.result.per_direction_counts, task);
    out << "training set: " << outcome.train.size() << " examples\n";
  }
  log.Info("select.done",
           {{"selected", outcome.result.selected.size()},
            {"skipped_empty_sets", outcome.result.skipped_empty_sets},
            {"require_label_agreement", outcome.require_label_agreement},
            {"directions", CountsJson(outcome.result.per_direction_counts)},
            {"train_size", outcome.train.size()}});
  return 0;
}

int CmdEvaluate(const RunConfig& config, const EvaluateArgs& args,
                std::ostream& out, Logger& log) {
  if (args.cells.empty() == args.predictions.empty()) {
    throw ConfigError("evaluate needs either --cells or --predictions");
  }
  std::vector<MethodRun> runs;
  if (!args.cells.empty()) {
    runs = RunsFromCells(args.cells);
  } else {
    auto gold = config.gold;
    for (const auto& [task, path] : args.gold) gold[task] = path;
    runs = RunsFromPredictions(args.predictions, gold);
  }
  log.Info("evaluate.start", {{"methods", runs.size()}});
  return WriteReport(config, runs, args.baseline, out, log);
}

int CmdReport(const RunConfig& config, const std::vector<fs::path>& cells,
              const std::optional<std::string>& baseline, std::ostream& out,
              Logger& log) {
  std::vector<fs::path> files = cells;
  if (files.empty()) files.push_back(config.output_dir / kReportJsonl);
  return WriteReport(config, RunsFromCells(files), baseline, out, log);
}

int CmdSweep(const RunConfig& config, std::ostream& out, Logger& log) {
  ValidateRunConfig(config);
  if (config.method != "flipda") throw ConfigError("sweep runs flipda only");
  const TaskSpec& task = ConfiguredTask(config);
  const Dataset dataset = LoadTrain(config, task);
  Services services = MakeServices(config);
  const SweepGrid grid = EffectiveSweepGrid(config);

  std::string summary;
  bool backend_failed = false;
  std::size_t runs = 0;
  for (double ratio : grid.mask_ratios) {
    for (DecodeStrategy decode : grid.decodes) {
      for (const auto& fill : grid.fills) {
        RunConfig run = config;
        run.fill.mask_ratio = ratio;
        run.fill.decode = decode;
        run.fill.fill_strategy = fill;
        const AugmentOutcome augmented = Augment(run, task, dataset, services);
        backend_failed = backend_failed || augmented.backend_failed;
        for (AgreementMode mode : grid.agreement) {
          run.agreement = mode;
          const std::string name = SweepRunName(ratio, decode, fill, mode);
          const fs::path dir = config.output_dir / name;
          fs::create_directories(dir);
          SaveCandidates(dir / kCandidatesFile, augmented.candidates);
          const SelectOutcome selected = SelectAndAssemble(
              run, task, dataset, augmented.candidates, services);
          WriteSelection(dir, task, selected);

          ordered_json line;
          line["run"] = name;
          line["mask_ratio"] = ratio;
          line["decode"] = DecodeStrategyName(decode);
          line["fill_strategy"] = fill.Name();
          line["agreement"] = AgreementModeName(mode);
          line["require_label_agreement"] = selected.require_label_agreement;
          line["candidates"] = augmented.candidates.size();
          line["consistent"] = augmented.consistent;
          line["selected"] = selected.result.selected.size();
          summary += line.dump() + "\n";
          out << name << ": " << augmented.candidates.size() << " candidates, "
              << selected.result.selected.size() << " selected\n";
          log.Info("sweep.run", line);
          ++runs;
        }
      }
    }
  }
  WriteText(config.output_dir / kSweepFile, summary);
  out << runs << " runs\n";
  return backend_failed ? 2 : 0;
}

}  // namespace flipda::cli
