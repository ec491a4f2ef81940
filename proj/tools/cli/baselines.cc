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

#include "baselines.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "flipda/util.h"

namespace flipda::cli {

namespace {

using Fields = std::map<std::string, std::string>;

CandidateRecord MakeVariant(const Example& example, Fields fields,
                            const std::string& method, double ratio,
                            std::uint64_t seed) {
  CandidateRecord r;
  r.source_id = example.id;
  r.fields = std::move(fields);
  r.intended_label = example.label;
  r.generation.method = method;
  r.generation.mask_ratio = ratio;
  r.generation.seed = seed;
  r.consistency_ok = true;
  r.answers = example.answers;
  return r;
}

const LexiconIndex& RequireLexicon(const BaselineContext& ctx,
                                   const std::string& method) {
  if (ctx.lexicon == nullptr) {
    throw std::invalid_argument(method + " needs a lexicon");
  }
  return *ctx.lexicon;
}

template <typename Fn>
std::vector<CandidateRecord> PerVariant(const std::string& method,
                                        const Example& example,
                                        const BaselineContext& ctx,
                                        std::uint64_t seed, double ratio,
                                        Fn rewrite) {
  std::vector<CandidateRecord> out;
  for (std::size_t v = 0; v < ctx.settings->n_aug; ++v) {
    const std::uint64_t variant_seed = SplitSeed(seed, method, v);
    Rng rng(variant_seed);
    Fields fields = example.fields;
    for (const auto& name : ctx.task->AugmentableFields()) {
      auto it = fields.find(name);
      if (it != fields.end()) it->second = rewrite(it->second, rng);
    }
    out.push_back(
        MakeVariant(example, std::move(fields), method, ratio, variant_seed));
  }
  return out;
}

}  // namespace

std::string MaskAndFill(const std::string& text, double ratio,
                        InfillBackend& backend, Rng& rng) {
  TokenSeq seq = Tokenize(text);
  std::vector<std::size_t> words;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (seq.tokens[i].kind == TokenKind::kWord) words.push_back(i);
  }
  auto picks = rng.SampleWithoutReplacement(
      words.size(), RoundHalfUpCount(ratio, words.size()));
  if (picks.empty()) return text;
  std::set<std::size_t> masked;
  for (std::size_t p : picks) masked.insert(words[p]);

  InfillRequest request;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    request.text_with_sentinels += masked.count(i)
                                       ? BlankSentinel(request.blank_count++)
                                       : seq.tokens[i].surface;
  }
  const InfillResponse response = backend.Infill(request);
  std::size_t next = 0;
  for (std::size_t i : masked) seq.tokens[i].surface = response.fills[next++];
  return Detokenize(seq);
}

std::vector<CandidateRecord> AugmentWithBaseline(
    const std::string& method, const Example& example,
    const BaselineContext& ctx, std::uint64_t example_seed,
    std::vector<std::string>* warnings) {
  const BaselineSettings& s = *ctx.settings;
  if (method == "sr") {
    const auto& lex = RequireLexicon(ctx, method);
    return PerVariant(
        method, example, ctx, example_seed, s.ratio,
        [&](const std::string& text, Rng& rng) {
          return Detokenize(SynonymReplace(Tokenize(text), s.ratio, lex, rng));
        });
  }
  if (method == "knn") {
    const auto& lex = RequireLexicon(ctx, method);
    return PerVariant(method, example, ctx, example_seed, s.ratio,
                      [&](const std::string& text, Rng& rng) {
                        return Detokenize(KnnReplace(Tokenize(text), s.ratio,
                                                     lex, s.knn_k, rng));
                      });
  }
  if (method == "tbert" || method == "t5mlm") {
    if (ctx.infill == nullptr) {
      throw std::invalid_argument(method + " needs an infill backend");
    }
    if (method == "tbert") {
      return PerVariant(
          method, example, ctx, example_seed, s.tbert_p,
          [&](const std::string& text, Rng& rng) {
            return Detokenize(MlmTokenReplace(Tokenize(text), s.tbert_p,
                                              *ctx.infill, s.max_tokens, rng));
          });
    }
    return PerVariant(method, example, ctx, example_seed, s.t5_mask_ratio,
                      [&](const std::string& text, Rng& rng) {
                        return MaskAndFill(text, s.t5_mask_ratio, *ctx.infill,
                                           rng);
                      });
  }

  const auto fields_to_rewrite = ctx.task->AugmentableFields();
  if (method == "eda") {
    const auto& lex = RequireLexicon(ctx, method);
    const EdaOptions options{s.eda_alpha, s.eda_n_aug, s.eda_lowercase};
    const std::uint64_t seed = SplitSeed(example_seed, method);
    Rng rng(seed);
    std::vector<Fields> variants(s.eda_n_aug, example.fields);
    for (const auto& name : fields_to_rewrite) {
      auto it = example.fields.find(name);
      if (it == example.fields.end()) continue;
      const auto outs = EdaAugment(Tokenize(it->second), options, lex, rng);
      for (std::size_t v = 0; v < outs.size(); ++v) {
        variants[v][name] = Detokenize(outs[v]);
      }
    }
    std::vector<CandidateRecord> out;
    for (auto& fields : variants) {
      out.push_back(
          MakeVariant(example, std::move(fields), method, s.eda_alpha, seed));
    }
    return out;
  }

  if (method == "bt10" || method == "bt6") {
    if (ctx.translator == nullptr) {
      throw std::invalid_argument(method + " needs a translator backend");
    }
    const auto& chain = method == "bt10" ? Bt10Chain() : Bt6Chain();
    std::map<std::string, Fields> by_pivot;
    std::map<std::string, std::size_t> pivot_hits;
    std::size_t rewritten = 0;
    for (const auto& name : fields_to_rewrite) {
      auto it = example.fields.find(name);
      if (it == example.fields.end()) continue;
      ++rewritten;
      auto bt = BackTranslate(it->second, chain, *ctx.translator);
      if (warnings != nullptr) {
        for (auto& w : bt.warnings) {
          warnings->push_back(example.id + ": " + std::move(w));
        }
      }
      for (std::size_t i = 0; i < bt.pivots.size(); ++i) {
        auto& fields =
            by_pivot.try_emplace(bt.pivots[i], example.fields).first->second;
        fields[name] = bt.texts[i];
        ++pivot_hits[bt.pivots[i]];
      }
    }
    std::vector<CandidateRecord> out;
    for (const auto& pivot : chain) {
      // A pivot that failed for any field yields no variant.
      if (pivot_hits[pivot] != rewritten || rewritten == 0) continue;
      auto record = MakeVariant(example, by_pivot[pivot], method, 0.0,
                                SplitSeed(example_seed, pivot));
      record.generation.decode = "pivot=" + pivot;
      out.push_back(std::move(record));
    }
    return out;
  }
  throw std::invalid_argument("unknown baseline method " + method);
}

}  // namespace flipda::cli
