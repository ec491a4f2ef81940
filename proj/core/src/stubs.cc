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

#include "flipda/stubs.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "flipda/error.h"
#include "flipda/lexops.h"
#include "flipda/util.h"

namespace flipda {

std::string StubInfillFill(std::string_view context, std::size_t blank_index,
                           const std::vector<std::string>& lexicon,
                           std::uint64_t seed) {
  if (lexicon.empty()) throw std::invalid_argument("empty stub lexicon");
  const std::uint64_t key = Fnv1a64(context) + blank_index + seed;
  return lexicon[key % lexicon.size()];
}

StubInfiller::StubInfiller(std::vector<std::string> lexicon, std::uint64_t seed)
    : lexicon_(std::move(lexicon)), seed_(seed) {
  if (lexicon_.empty()) throw std::invalid_argument("empty stub lexicon");
}

InfillResponse StubInfiller::DoInfill(const InfillRequest& request) {
  std::uint64_t seed = seed_;
  if (request.decode.strategy == DecodeStrategy::kSample) {
    seed += request.decode.seed;
  }
  InfillResponse response;
  response.fills.reserve(request.blank_count);
  for (std::size_t i = 0; i < request.blank_count; ++i) {
    response.fills.push_back(
        StubInfillFill(request.text_with_sentinels, i, lexicon_, seed));
  }
  return response;
}

const std::vector<std::string>& DefaultStubLexicon() {
  static const std::vector<std::string> words = {
      "cat",    "river",  "quickly", "old",    "report", "city",
      "green",  "people", "after",   "small",  "market", "never",
      "found",  "water",  "early",   "school", "bright", "station",
      "slowly", "story",  "north",   "friend", "open",   "winter"};
  return words;
}

KeywordClassifier::KeywordClassifier(std::vector<Weight> weights) {
  for (auto& w : weights) table_[AsciiLower(w.word)][w.label] += w.weight;
}

KeywordClassifier KeywordClassifier::FromFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Weight> weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto stripped = StripWhitespace(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    Weight w;
    bool ok = cols.size() == 3;
    if (ok) {
      w.word = cols[0];
      w.label = cols[1];
      try {
        std::size_t used = 0;
        w.weight = std::stod(cols[2], &used);
        ok = used == cols[2].size();
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected word<TAB>label<TAB>weight");
    }
    weights.push_back(std::move(w));
  }
  return KeywordClassifier(std::move(weights));
}

std::vector<double> KeywordClassifier::Scores(
    std::string_view input, const std::vector<std::string>& labels) const {
  std::vector<double> scores(labels.size(), 0.0);
  for (const auto& token : Tokenize(input).tokens) {
    if (token.kind != TokenKind::kWord) continue;
    auto it = table_.find(AsciiLower(token.surface));
    if (it == table_.end()) continue;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto w = it->second.find(labels[i]);
      if (w != it->second.end()) scores[i] += w->second;
    }
  }
  return scores;
}

ClassifyResponse KeywordClassifier::DoClassify(const ClassifyRequest& request) {
  ClassifyResponse response;
  for (const auto& input : request.rendered_inputs) {
    auto scores = Scores(input, request.labels);
    const double top = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double& s : scores) {
      s = std::exp(s - top);
      sum += s;
    }
    for (double& s : scores) s /= sum;
    response.probs.push_back(std::move(scores));
  }
  return response;
}

TranslateResponse IdentityTranslator::DoTranslate(
    const TranslateRequest& request) {
  return TranslateResponse{request.texts};
}

void DictionaryTranslator::AddPair(std::string src, std::string tgt,
                                   Dictionary dictionary) {
  pairs_[{std::move(src), std::move(tgt)}] = std::move(dictionary);
}

TranslateResponse DictionaryTranslator::DoTranslate(
    const TranslateRequest& request) {
  auto it = pairs_.find({request.src, request.tgt});
  if (it == pairs_.end()) {
    throw BackendError(BackendError::Kind::kUnsupportedLanguagePair,
                       request.src + "->" + request.tgt);
  }
  TranslateResponse response;
  for (const auto& text : request.texts) {
    TokenSeq seq = Tokenize(text);
    for (auto& token : seq.tokens) {
      if (token.kind != TokenKind::kWord) continue;
      auto hit = it->second.find(token.surface);
      if (hit != it->second.end()) token.surface = hit->second;
    }
    response.texts.push_back(Detokenize(seq));
  }
  return response;
}

}  // namespace flipda
