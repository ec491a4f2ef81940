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

#ifndef FLIPDA_UTIL_H_
#define FLIPDA_UTIL_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace flipda {

// Number of items selected by a fractional rate: floor(ratio * count + 1/2),
// never negative. A 1e-9 slack absorbs binary representation error so that
// e.g. 0.5 * 5 and 0.3 * 10 land on the decimal answer.
std::size_t RoundHalfUpCount(double ratio, std::size_t count);

// Half-up rounding to two decimals, used for every displayed score.
double RoundHalfUp2(double value);

// 64-bit FNV-1a.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = kFnvOffsetBasis);

// Derives a child seed from `parent` and a tag: FNV-1a over the eight
// little-endian bytes of `parent` followed by the bytes of `tag`.
std::uint64_t SplitSeed(std::uint64_t parent, std::string_view tag);

// As above with a trailing index, hashed as eight little-endian bytes.
std::uint64_t SplitSeed(std::uint64_t parent, std::string_view tag,
                        std::uint64_t index);

// Seeded generator with a platform-independent draw sequence. The engine is
// std::mt19937_64 (its output is fixed by the standard); the integer and
// real mappings below are our own so no library distribution is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). Rejection sampling on the raw 64-bit output;
  // n must be positive.
  std::size_t Uniform(std::size_t n);

  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double UnitDouble();

  // One UnitDouble() draw compared against p.
  bool Bernoulli(double p) { return UnitDouble() < p; }

  // Draws `count` distinct indices from [0, n) by a partial Fisher-Yates
  // pass over the identity permutation; result in draw order.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t count);

 private:
  std::mt19937_64 engine_;
};

std::string AsciiLower(std::string_view text);
std::string_view StripWhitespace(std::string_view text);

}  // namespace flipda

#endif  // FLIPDA_UTIL_H_
