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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsk {

// The closed set of candidate reasoning languages. Enumerator values follow
// the canonical order: English first, then the remaining fifteen in listing
// order. Every tie-break in the library compares these values.
enum class Language : std::uint8_t {
  kEn = 0,
  kAr,
  kBn,
  kZh,
  kFr,
  kDe,
  kHi,
  kIt,
  kJa,
  kKo,
  kPt,
  kRu,
  kEs,
  kTh,
  kTr,
  kVi,
};

inline constexpr std::size_t kLanguageCount = 16;

// All languages in canonical order.
const std::array<Language, kLanguageCount>& AllLanguages();

// Canonical rank, 0 for English. Smaller rank wins ties.
constexpr int CanonicalRank(Language lang) { return static_cast<int>(lang); }

constexpr bool CanonicalLess(Language a, Language b) {
  return CanonicalRank(a) < CanonicalRank(b);
}

// ISO-639-1 style code, e.g. "tr".
std::string_view Code(Language lang);

// English display name, e.g. "Turkish". Used in prompt keys such as
// `reasoning_in_Turkish` and `Turkish_translation`.
std::string_view EnglishName(Language lang);

// Parses a two-letter code. Throws lsk::Error(kInvalidArgument) on anything
// outside the closed set.
Language ParseLanguage(std::string_view code);
std::optional<Language> TryParseLanguage(std::string_view code);

// Case-insensitive lookup by English name ("arabic" -> kAr).
std::optional<Language> LanguageFromEnglishName(std::string_view name);

// Parses a comma-separated code list ("en,tr,hi"), rejecting duplicates.
std::vector<Language> ParseLanguageList(std::string_view csv);

std::string JoinCodes(const std::vector<Language>& langs);

// Returns `langs` sorted into canonical order.
std::vector<Language> CanonicalSorted(std::vector<Language> langs);

}  // namespace lsk
