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

#include <stdexcept>

#include "flipda/error.h"
#include "flipda/lexops.h"

namespace flipda {

TokenSeq TruncateTokens(const TokenSeq& seq, std::size_t max_tokens) {
  TokenSeq out;
  std::size_t kept = 0;
  for (const auto& t : seq.tokens) {
    if (t.kind != TokenKind::kSpace) {
      if (kept == max_tokens) break;
      ++kept;
    }
    out.tokens.push_back(t);
  }
  return out;
}

TokenSeq MlmTokenReplace(const TokenSeq& seq, double p, InfillBackend& backend,
                         std::size_t max_tokens, Rng& rng,
                         DecodeParams decode) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must be in [0, 1]");
  }
  const TokenSeq context = TruncateTokens(seq, max_tokens);
  TokenSeq out = context;
  for (std::size_t i = 0; i < context.tokens.size(); ++i) {
    if (context.tokens[i].kind != TokenKind::kWord) continue;
    if (!rng.Bernoulli(p)) continue;
    InfillRequest request;
    for (std::size_t j = 0; j < context.tokens.size(); ++j) {
      request.text_with_sentinels +=
          j == i ? BlankSentinel(0) : context.tokens[j].surface;
    }
    request.blank_count = 1;
    request.decode = decode;
    const InfillResponse response = backend.Infill(request);
    if (!response.fills[0].empty()) out.tokens[i].surface = response.fills[0];
  }
  return out;
}

const std::vector<std::string>& Bt10Chain() {
  // Spanish, French, German, Afrikaans, Russian, Czech, Estonian,
  // Haitian Creole, Bengali.
  static const std::vector<std::string> chain = {"es", "fr", "de", "af", "ru",
                                                 "cs", "et", "ht", "bn"};
  return chain;
}

const std::vector<std::string>& Bt6Chain() {
  static const std::vector<std::string> chain = {"es", "fr", "de", "ru", "ht"};
  return chain;
}

BackTranslation BackTranslate(const std::string& text,
                              const std::vector<std::string>& chain,
                              TranslatorBackend& translator,
                              const std::string& source_language) {
  if (chain.empty()) throw std::invalid_argument("empty pivot chain");
  BackTranslation out;
  for (const auto& pivot : chain) {
    try {
      const auto there = translator.Translate({{text}, source_language, pivot});
      const auto back =
          translator.Translate({there.texts, pivot, source_language});
      out.texts.push_back(back.texts.at(0));
      out.pivots.push_back(pivot);
    } catch (const BackendError& e) {
      out.warnings.push_back("pivot " + pivot + " skipped: " + e.what());
    }
  }
  return out;
}

}  // namespace flipda
