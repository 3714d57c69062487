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

#include "lsk/language.h"

#include <gtest/gtest.h>

#include <set>

#include "lsk/error.h"

namespace lsk {
namespace {

TEST(LanguageTest, CanonicalOrderStartsWithEnglishAndCoversSixteen) {
  const auto& all = AllLanguages();
  ASSERT_EQ(all.size(), 16u);
  EXPECT_EQ(all.front(), Language::kEn);
  const std::vector<std::string> codes = {"en", "ar", "bn", "zh", "fr", "de", "hi", "it",
                                          "ja", "ko", "pt", "ru", "es", "th", "tr", "vi"};
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(Code(all[i]), codes[i]);
    EXPECT_EQ(CanonicalRank(all[i]), static_cast<int>(i));
  }
}

TEST(LanguageTest, CodesAndNamesRoundTrip) {
  std::set<std::string> names;
  for (Language lang : AllLanguages()) {
    EXPECT_EQ(ParseLanguage(Code(lang)), lang);
    auto by_name = LanguageFromEnglishName(EnglishName(lang));
    ASSERT_TRUE(by_name.has_value());
    EXPECT_EQ(*by_name, lang);
    names.insert(std::string(EnglishName(lang)));
  }
  EXPECT_EQ(names.size(), 16u);
  EXPECT_EQ(LanguageFromEnglishName("aRaBiC"), Language::kAr);
  EXPECT_EQ(EnglishName(Language::kTr), "Turkish");
}

TEST(LanguageTest, RejectsUnknownCodes) {
  EXPECT_FALSE(TryParseLanguage("xx").has_value());
  EXPECT_FALSE(TryParseLanguage("").has_value());
  try {
    ParseLanguage("klingon");
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
  EXPECT_FALSE(LanguageFromEnglishName("Klingon").has_value());
}

TEST(LanguageTest, ParsesListsAndRejectsDuplicates) {
  auto langs = ParseLanguageList("en,tr,hi");
  ASSERT_EQ(langs.size(), 3u);
  EXPECT_EQ(langs[1], Language::kTr);
  EXPECT_THROW(ParseLanguageList("en,tr,en"), Error);
  EXPECT_THROW(ParseLanguageList("en,zz"), Error);
  EXPECT_EQ(JoinCodes(CanonicalSorted(langs)), "en,hi,tr");
}

TEST(LanguageTest, CanonicalLessMatchesRank) {
  EXPECT_TRUE(CanonicalLess(Language::kEn, Language::kAr));
  EXPECT_TRUE(CanonicalLess(Language::kHi, Language::kEs));
  EXPECT_FALSE(CanonicalLess(Language::kVi, Language::kVi));
}

}  // namespace
}  // namespace lsk
