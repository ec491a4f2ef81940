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
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "flipda/lexops.h"

namespace flipda {

namespace {

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool IsSpaceByte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::string StripCr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::size_t TokenSeq::WordCount() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(),
                    [](const Token& t) { return t.kind == TokenKind::kWord; }));
}

TokenSeq Tokenize(std::string_view text) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t j = i + 1;
    Token token;
    if (IsWordByte(c)) {
      while (j < text.size() && IsWordByte(static_cast<unsigned char>(text[j])))
        ++j;
      token.kind = TokenKind::kWord;
      token.maskable = true;
    } else if (IsSpaceByte(c)) {
      while (j < text.size() &&
             IsSpaceByte(static_cast<unsigned char>(text[j])))
        ++j;
      token.kind = TokenKind::kSpace;
    } else {
      token.kind = TokenKind::kPunct;
    }
    token.surface = std::string(text.substr(i, j - i));
    seq.tokens.push_back(std::move(token));
    i = j;
  }
  return seq;
}

std::string Detokenize(const TokenSeq& seq) {
  std::string out;
  for (const auto& t : seq.tokens) out += t.surface;
  return out;
}

void LexiconIndex::LoadSynonyms(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = StripCr(line);
    const auto stripped = StripWhitespace(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected word<TAB>synonyms");
    }
    std::vector<std::string> synonyms;
    std::stringstream rest(line.substr(tab + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto stripped = StripWhitespace(item);
      if (!stripped.empty()) synonyms.emplace_back(stripped);
    }
    AddSynonyms(line.substr(0, tab), std::move(synonyms));
  }
}

void LexiconIndex::LoadEmbeddings(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (StripWhitespace(line).empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> vec;
    std::string value;
    while (fields >> value) {
      try {
        std::size_t used = 0;
        vec.push_back(std::stod(value, &used));
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": bad value " + value);
      }
    }
    try {
      AddEmbedding(word, std::move(vec));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
}

void LexiconIndex::LoadStopwords(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto word = StripWhitespace(line);
    if (!word.empty() && word.front() != '#') AddStopword(std::string(word));
  }
}

void LexiconIndex::AddSynonyms(const std::string& word,
                               std::vector<std::string> synonyms) {
  auto& entry = synonyms_[word];
  for (auto& s : synonyms) entry.push_back(std::move(s));
}

void LexiconIndex::AddEmbedding(const std::string& word,
                                std::vector<double> vector) {
  if (vector.empty()) throw std::invalid_argument("empty vector for " + word);
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw std::invalid_argument("vector for " + word + " has dimension " +
                                std::to_string(vector.size()) + ", expected " +
                                std::to_string(dimension_));
  }
  embeddings_[word] = std::move(vector);
}

void LexiconIndex::AddStopword(const std::string& word) {
  stopwords_.insert(AsciiLower(word));
}

bool LexiconIndex::IsStopword(std::string_view word) const {
  return stopwords_.count(AsciiLower(word)) > 0;
}

std::vector<std::string> LexiconIndex::Synonyms(std::string_view word) const {
  auto it = synonyms_.find(std::string(word));
  if (it == synonyms_.end()) it = synonyms_.find(AsciiLower(word));
  if (it == synonyms_.end()) return {};
  const std::string lower = AsciiLower(word);
  std::vector<std::string> out;
  for (const auto& s : it->second) {
    if (AsciiLower(s) != lower) out.push_back(s);
  }
  return out;
}

std::string LexiconIndex::EmbeddingKey(std::string_view word) const {
  if (embeddings_.count(std::string(word))) return std::string(word);
  std::string lower = AsciiLower(word);
  if (embeddings_.count(lower)) return lower;
  return {};
}

std::vector<std::string> LexiconIndex::Nearest(std::string_view word,
                                               std::size_t k) const {
  const std::string key = EmbeddingKey(word);
  if (key.empty() || k == 0) return {};
  const auto& query = embeddings_.at(key);
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  const double query_norm = norm(query);

  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(embeddings_.size());
  for (const auto& [other, vec] : embeddings_) {
    if (other == key) continue;
    const double other_norm = norm(vec);
    double sim = 0.0;
    if (query_norm > 0.0 && other_norm > 0.0) {
      double dot = 0.0;
      for (std::size_t i = 0; i < vec.size(); ++i) dot += query[i] * vec[i];
      sim = dot / (query_norm * other_norm);
    }
    scored.emplace_back(sim, &other);
  }
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return *a.second < *b.second;
                    });
  std::vector<std::string> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(*scored[i].second);
  return out;
}

}  // namespace flipda
