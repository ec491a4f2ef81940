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

#include "flipda/util.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flipda {

std::size_t RoundHalfUpCount(double ratio, std::size_t count) {
  const double scaled = ratio * static_cast<double>(count);
  if (!(scaled > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
}

double RoundHalfUp2(double value) {
  return std::floor(value * 100.0 + 0.5 + 1e-7) / 100.0;
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t hash = basis;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= kFnvPrime;
  }
  return hash;
}

namespace {

std::string LittleEndian(std::uint64_t value) {
  std::string out(8, '\0');
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  return out;
}

}  // namespace

std::uint64_t SplitSeed(std::uint64_t parent, std::string_view tag) {
  return Fnv1a64(tag, Fnv1a64(LittleEndian(parent)));
}

std::uint64_t SplitSeed(std::uint64_t parent, std::string_view tag,
                        std::uint64_t index) {
  return Fnv1a64(LittleEndian(index), SplitSeed(parent, tag));
}

std::size_t Rng::Uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::Uniform: empty range");
  const std::uint64_t bound = n;
  // Values below `threshold` would bias the modulo; 2^64 mod n.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return static_cast<std::size_t>(x % bound);
  }
}

double Rng::UnitDouble() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> Rng::SampleWithoutReplacement(std::size_t n,
                                                       std::size_t count) {
  if (count > n) count = n;
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + Uniform(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view StripWhitespace(std::string_view text) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

}  // namespace flipda
