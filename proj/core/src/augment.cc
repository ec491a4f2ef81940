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

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>

#include "flipda/lexops.h"

namespace flipda {

namespace {

void RequireFraction(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  }
}

std::vector<std::size_t> WordPositions(const TokenSeq& seq) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (seq.tokens[i].kind == TokenKind::kWord) out.push_back(i);
  }
  return out;
}

// Shared draw loop of synonym and KNN replacement.
TokenSeq ReplaceEligible(
    const TokenSeq& seq, double ratio, std::vector<std::size_t> eligible,
    const std::function<std::vector<std::string>(const std::string&)>& pool_of,
    Rng& rng) {
  const std::size_t target = RoundHalfUpCount(ratio, eligible.size());
  TokenSeq out = seq;
  std::size_t drawn = 0;
  std::size_t replaced = 0;
  while (replaced < target && drawn < eligible.size()) {
    const std::size_t j = drawn + rng.Uniform(eligible.size() - drawn);
    std::swap(eligible[drawn], eligible[j]);
    const std::size_t pos = eligible[drawn++];
    const auto pool = pool_of(seq.tokens[pos].surface);
    if (pool.empty()) continue;
    out.tokens[pos].surface = pool[rng.Uniform(pool.size())];
    ++replaced;
  }
  return out;
}

Token MakeWord(std::string surface) {
  return Token{std::move(surface), TokenKind::kWord, true};
}

Token MakeSpace() { return Token{" ", TokenKind::kSpace, false}; }

}  // namespace

TokenSeq SynonymReplace(const TokenSeq& seq, double ratio,
                        const LexiconIndex& lex, Rng& rng) {
  RequireFraction(ratio, "ratio");
  std::vector<std::size_t> eligible;
  for (std::size_t pos : WordPositions(seq)) {
    if (!lex.IsStopword(seq.tokens[pos].surface)) eligible.push_back(pos);
  }
  return ReplaceEligible(
      seq, ratio, std::move(eligible),
      [&lex](const std::string& w) { return lex.Synonyms(w); }, rng);
}

TokenSeq KnnReplace(const TokenSeq& seq, double ratio, const LexiconIndex& lex,
                    std::size_t k, Rng& rng) {
  RequireFraction(ratio, "ratio");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<std::size_t> eligible;
  for (std::size_t pos : WordPositions(seq)) {
    const auto& word = seq.tokens[pos].surface;
    if (!lex.IsStopword(word) && !lex.EmbeddingKey(word).empty()) {
      eligible.push_back(pos);
    }
  }
  return ReplaceEligible(
      seq, ratio, std::move(eligible),
      [&lex, k](const std::string& w) { return lex.Nearest(w, k); }, rng);
}

TokenSeq RandomInsertion(const TokenSeq& seq, double alpha,
                         const LexiconIndex& lex, Rng& rng) {
  RequireFraction(alpha, "alpha");
  TokenSeq out = seq;
  const std::size_t n = RoundHalfUpCount(alpha, seq.WordCount());
  for (std::size_t t = 0; t < n; ++t) {
    for (int attempt = 0; attempt < 10; ++attempt) {
      const auto words = WordPositions(out);
      if (words.empty()) return out;
      const auto& source = out.tokens[words[rng.Uniform(words.size())]];
      const auto synonyms = lex.Synonyms(source.surface);
      if (synonyms.empty()) continue;
      std::string word = synonyms[rng.Uniform(synonyms.size())];
      const std::size_t slot = rng.Uniform(words.size() + 1);
      if (slot < words.size()) {
        const auto at = out.tokens.begin() + words[slot];
        out.tokens.insert(at, {MakeWord(std::move(word)), MakeSpace()});
      } else {
        const auto at = out.tokens.begin() + words.back() + 1;
        out.tokens.insert(at, {MakeSpace(), MakeWord(std::move(word))});
      }
      break;
    }
  }
  return out;
}

TokenSeq RandomSwap(const TokenSeq& seq, double alpha, Rng& rng) {
  RequireFraction(alpha, "alpha");
  TokenSeq out = seq;
  const auto words = WordPositions(seq);
  const std::size_t n = RoundHalfUpCount(alpha, words.size());
  if (words.size() < 2) return out;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = rng.Uniform(words.size());
    std::size_t j = rng.Uniform(words.size() - 1);
    if (j >= i) ++j;
    std::swap(out.tokens[words[i]].surface, out.tokens[words[j]].surface);
  }
  return out;
}

TokenSeq RandomDeletion(const TokenSeq& seq, double alpha, Rng& rng) {
  RequireFraction(alpha, "alpha");
  const auto words = WordPositions(seq);
  const std::size_t n = RoundHalfUpCount(alpha, words.size());
  auto picks = rng.SampleWithoutReplacement(words.size(), n);
  std::vector<std::size_t> doomed;
  for (std::size_t p : picks) doomed.push_back(words[p]);
  // Right to left so earlier indices stay valid.
  std::sort(doomed.rbegin(), doomed.rend());
  TokenSeq out = seq;
  for (std::size_t pos : doomed) {
    auto& tokens = out.tokens;
    tokens.erase(tokens.begin() + pos);
    if (pos < tokens.size() && tokens[pos].kind == TokenKind::kSpace) {
      tokens.erase(tokens.begin() + pos);
    } else if (pos > 0 && tokens[pos - 1].kind == TokenKind::kSpace) {
      tokens.erase(tokens.begin() + pos - 1);
    }
  }
  return out;
}

std::vector<TokenSeq> EdaAugment(const TokenSeq& seq, const EdaOptions& options,
                                 const LexiconIndex& lex, Rng& rng) {
  RequireFraction(options.alpha, "alpha");
  TokenSeq base = seq;
  if (options.lowercase) {
    for (auto& t : base.tokens) {
      if (t.kind == TokenKind::kWord) t.surface = AsciiLower(t.surface);
    }
  }
  std::vector<TokenSeq> out;
  out.reserve(options.n_aug);
  for (std::size_t v = 0; v < options.n_aug; ++v) {
    switch (rng.Uniform(4)) {
      case 0:
        out.push_back(SynonymReplace(base, options.alpha, lex, rng));
        break;
      case 1:
        out.push_back(RandomInsertion(base, options.alpha, lex, rng));
        break;
      case 2:
        out.push_back(RandomSwap(base, options.alpha, rng));
        break;
      default:
        out.push_back(RandomDeletion(base, options.alpha, rng));
        break;
    }
  }
  return out;
}

}  // namespace flipda
