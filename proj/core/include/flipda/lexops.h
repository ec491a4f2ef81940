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

// Tokenization and the word-level baseline augmenters.
//
// Every ratio-based operation replaces RoundHalfUpCount(ratio, eligible)
// tokens. Positions are drawn one at a time, uniformly from the eligible
// positions not drawn yet (a partial Fisher-Yates pass over the eligible
// list in ascending order); a replacement, when one is needed, is drawn
// right after its position. Words whose replacement pool is empty are
// skipped and the next position is drawn, so the count can fall short only
// when the pool-less words exhaust the eligible list.

#ifndef FLIPDA_LEXOPS_H_
#define FLIPDA_LEXOPS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flipda/backends.h"
#include "flipda/util.h"

namespace flipda {

enum class TokenKind { kWord, kPunct, kSpace };

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::kWord;
  bool maskable = false;

  bool operator==(const Token&) const = default;
};

struct TokenSeq {
  std::vector<Token> tokens;

  std::size_t WordCount() const;
  bool operator==(const TokenSeq&) const = default;
};

// Lossless segmentation. Words are maximal runs of ASCII letters and digits
// and of bytes >= 0x80 (so every non-ASCII code point counts as a word
// character); whitespace runs form one space token; every other ASCII byte is
// its own punctuation token. Only words are maskable.
TokenSeq Tokenize(std::string_view text);
std::string Detokenize(const TokenSeq& seq);

class LexiconIndex {
 public:
  LexiconIndex() = default;

  // "word<TAB>syn1,syn2,..." per line; blank and "#" lines skipped.
  void LoadSynonyms(const std::filesystem::path& path);
  // "word v1 v2 ... vD" per line; D is fixed by the first line.
  void LoadEmbeddings(const std::filesystem::path& path);
  // One word per line.
  void LoadStopwords(const std::filesystem::path& path);

  void AddSynonyms(const std::string& word, std::vector<std::string> synonyms);
  void AddEmbedding(const std::string& word, std::vector<double> vector);
  void AddStopword(const std::string& word);

  bool IsStopword(std::string_view word) const;
  // Synonyms of `word` (exact entry first, then its lower-case form) with
  // the word itself removed.
  std::vector<std::string> Synonyms(std::string_view word) const;
  // Key under which `word` has an embedding (exact, then lower-case); empty
  // when absent.
  std::string EmbeddingKey(std::string_view word) const;
  // The k entries nearest to `word` by cosine similarity, the word itself
  // excluded, ordered by decreasing similarity then lexicographically.
  // Zero vectors have similarity 0 to everything.
  std::vector<std::string> Nearest(std::string_view word, std::size_t k) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t embedding_count() const { return embeddings_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> synonyms_;
  std::map<std::string, std::vector<double>> embeddings_;
  std::set<std::string> stopwords_;
  std::size_t dimension_ = 0;
};

// Synonym replacement. Eligible tokens are words that are not stopwords.
TokenSeq SynonymReplace(const TokenSeq& seq, double ratio,
                        const LexiconIndex& lex, Rng& rng);

// KNN replacement. Eligible tokens are non-stopword words with an embedding;
// the replacement is uniform over the k nearest neighbours.
TokenSeq KnnReplace(const TokenSeq& seq, double ratio, const LexiconIndex& lex,
                    std::size_t k, Rng& rng);

// The four EDA operations, each applied with RoundHalfUpCount(alpha, n)
// where n counts word tokens (non-stopwords for replacement). Punctuation is
// never moved, inserted or deleted.
TokenSeq RandomInsertion(const TokenSeq& seq, double alpha,
                         const LexiconIndex& lex, Rng& rng);
TokenSeq RandomSwap(const TokenSeq& seq, double alpha, Rng& rng);
TokenSeq RandomDeletion(const TokenSeq& seq, double alpha, Rng& rng);

struct EdaOptions {
  double alpha = 0.1;
  std::size_t n_aug = 9;
  // Lower-case words before augmenting, as the original EDA code does.
  bool lowercase = false;
};

// Each variant applies one operation drawn uniformly from {synonym
// replacement, insertion, swap, deletion}.
std::vector<TokenSeq> EdaAugment(const TokenSeq& seq, const EdaOptions& options,
                                 const LexiconIndex& lex, Rng& rng);

// Drops everything after the first `max_tokens` non-space tokens.
TokenSeq TruncateTokens(const TokenSeq& seq, std::size_t max_tokens);

// Masked-LM token replacement. The sequence is truncated to `max_tokens`
// first; every word then gets an independent Bernoulli(p) draw and each hit
// is replaced by the backend's fill of a single [BLANK_0] put in its place in
// the truncated original text. Empty fills keep the word.
TokenSeq MlmTokenReplace(const TokenSeq& seq, double p, InfillBackend& backend,
                         std::size_t max_tokens, Rng& rng,
                         DecodeParams decode = {});

// Pivot chains: nine pivots for BT-10 and five for BT-6.
const std::vector<std::string>& Bt10Chain();
const std::vector<std::string>& Bt6Chain();

struct BackTranslation {
  // One entry per pivot that succeeded, in chain order.
  std::vector<std::string> texts;
  std::vector<std::string> pivots;
  std::vector<std::string> warnings;
};

// text -> pivot -> text for each pivot. A BackendError for one pivot omits
// that pivot and records a warning.
BackTranslation BackTranslate(const std::string& text,
                              const std::vector<std::string>& chain,
                              TranslatorBackend& translator,
                              const std::string& source_language = "en");

}  // namespace flipda

#endif  // FLIPDA_LEXOPS_H_
