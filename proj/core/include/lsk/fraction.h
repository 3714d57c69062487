// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace lsk {

// Non-negative exact ratio, always stored reduced. 0/0 is allowed and reads
// as zero; it marks an empty denominator (e.g. a language with no votes).
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  static Fraction Of(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return {0, 0};
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }

  double value() const {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }

  // Fixed-point rendering, e.g. 2/3 -> "0.6667" at 4 decimals.
  std::string Format(int decimals = 4) const;

  bool operator==(const Fraction&) const = default;
};

// Exact comparison by cross-multiplication (0/0 compares as 0).
inline bool operator<(const Fraction& a, const Fraction& b) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(a.num) * (b.den == 0 ? 1 : b.den);
  const unsigned __int128 rhs = static_cast<unsigned __int128>(b.num) * (a.den == 0 ? 1 : a.den);
  return lhs < rhs;
}

}  // namespace lsk
