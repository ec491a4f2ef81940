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

// Deterministic in-process backends. Every stub is a pure function of its
// request, its construction arguments and any fixture file it was built from.

#ifndef FLIPDA_STUBS_H_
#define FLIPDA_STUBS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flipda/backends.h"

namespace flipda {

// lexicon[(Fnv1a64(context) + blank_index + seed) mod |lexicon|], with
// wrapping 64-bit arithmetic. Throws std::invalid_argument on an empty
// lexicon.
std::string StubInfillFill(std::string_view context, std::size_t blank_index,
                           const std::vector<std::string>& lexicon,
                           std::uint64_t seed);

// Fills every blank with StubInfillFill over the full request text. Greedy
// and beam requests use the construction seed; sampling adds the request's
// decode seed to it.
class StubInfiller : public InfillBackend {
 public:
  explicit StubInfiller(std::vector<std::string> lexicon,
                        std::uint64_t seed = 0);

  const std::vector<std::string>& lexicon() const { return lexicon_; }

 protected:
  InfillResponse DoInfill(const InfillRequest& request) override;

 private:
  std::vector<std::string> lexicon_;
  std::uint64_t seed_;
};

// Word list used by the CLI's --stub infiller.
const std::vector<std::string>& DefaultStubLexicon();

// Per-label score is the sum of weights of matched lower-cased word tokens
// (each occurrence counts); probabilities are the softmax at temperature 1.
class KeywordClassifier : public ClassifierBackend {
 public:
  struct Weight {
    std::string word;
    std::string label;
    double weight = 0.0;
  };

  explicit KeywordClassifier(std::vector<Weight> weights);

  // Fixture format: "word<TAB>label<TAB>weight" per line; '#' comments and
  // blank lines skipped. Throws std::runtime_error on malformed lines.
  static KeywordClassifier FromFile(const std::filesystem::path& path);

  // Raw per-label scores for one input, in `labels` order.
  std::vector<double> Scores(std::string_view input,
                             const std::vector<std::string>& labels) const;

 protected:
  ClassifyResponse DoClassify(const ClassifyRequest& request) override;

 private:
  // word -> label -> summed weight
  std::map<std::string, std::map<std::string, double>> table_;
};

class IdentityTranslator : public TranslatorBackend {
 protected:
  TranslateResponse DoTranslate(const TranslateRequest& request) override;
};

// Word-level dictionary translator. Word tokens found in the dictionary for
// (src, tgt) are replaced, everything else is copied. Pairs without a
// dictionary fail with kUnsupportedLanguagePair.
class DictionaryTranslator : public TranslatorBackend {
 public:
  using Dictionary = std::map<std::string, std::string>;

  void AddPair(std::string src, std::string tgt, Dictionary dictionary);

 protected:
  TranslateResponse DoTranslate(const TranslateRequest& request) override;

 private:
  std::map<std::pair<std::string, std::string>, Dictionary> pairs_;
};

// Adapters over plain callables; used by tests to script behaviour.
class FunctionInfiller : public InfillBackend {
 public:
  using Fn = std::function<InfillResponse(const InfillRequest&)>;
  explicit FunctionInfiller(Fn fn) : fn_(std::move(fn)) {}

 protected:
  InfillResponse DoInfill(const InfillRequest& request) override {
    return fn_(request);
  }

 private:
  Fn fn_;
};

class FunctionTranslator : public TranslatorBackend {
 public:
  using Fn = std::function<TranslateResponse(const TranslateRequest&)>;
  explicit FunctionTranslator(Fn fn) : fn_(std::move(fn)) {}

 protected:
  TranslateResponse DoTranslate(const TranslateRequest& request) override {
    return fn_(request);
  }

 private:
  Fn fn_;
};

}  // namespace flipda

#endif  // FLIPDA_STUBS_H_
