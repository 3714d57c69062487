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

#include "lsk/extract.h"

#include <gtest/gtest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "lsk/io.h"
#include "lsk/rng.h"

namespace lsk {
namespace {

using nlohmann::json;

McqItem ItemWith(const std::vector<std::string>& choices) {
  return MakeItem(DatasetId::kCustom, "Which one?", choices, 'A');
}

McqItem EnglishItem() {
  return ItemWith({"red dress", "black formal suit", "white shirt", "blue jeans"});
}

TEST(ExtractTest, GoldenFixtures) {
  const auto path = std::filesystem::path(LSK_TEST_DATA_DIR) / "extraction_golden.jsonl";
  std::size_t count = 0;
  ForEachLine(path, [&](std::size_t, std::string_view line) {
    const json f = json::parse(line);
    const McqItem item = ItemWith(f.at("choices").get<std::vector<std::string>>());
    const Extraction got = ExtractFinalAnswer(f.at("raw").get<std::string>(), item);
    const std::string label = got.label ? std::string(1, *got.label) : "invalid";
    EXPECT_EQ(label, f.at("expected").get<std::string>()) << f.at("name");
    EXPECT_EQ(ExtractionRuleName(got.rule), f.at("rule").get<std::string>()) << f.at("name");
    ++count;
  });
  EXPECT_GE(count, 40u);
}

TEST(ExtractTest, DocumentedExamples) {
  const McqItem item = EnglishItem();
  EXPECT_EQ(ExtractFinalAnswer(R"({"reasoning_in_English":"...","final_answer":"B"})", item).label,
            'B');
  EXPECT_EQ(ExtractFinalAnswer(R"({"final_answer":"B. black formal suit"})", item).label, 'B');
  const McqItem turkish = ItemWith({"kırmızı elbise", "siyah resmi takım", "beyaz gömlek", "mavi kot"});
  const Extraction t = ExtractFinalAnswer(R"({"final_answer":"siyah resmi takım"})", turkish);
  EXPECT_EQ(t.label, 'B');
  EXPECT_EQ(t.rule, ExtractionRule::kJsonChoiceText);
  const Extraction z = ExtractFinalAnswer("no json here\nAnswer: Z", item);
  EXPECT_FALSE(z.ok());
  EXPECT_EQ(z.rule, ExtractionRule::kInvalid);
}

TEST(ExtractTest, NormalizeForMatchFoldsCaseAndStripsPunctuation) {
  EXPECT_EQ(NormalizeForMatch("  Black, Formal-Suit! "), "blackformalsuit");
  EXPECT_EQ(NormalizeForMatch("ÄPFEL"), "äpfel");
  EXPECT_EQ(NormalizeForMatch("МИНСК"), "минск");
  EXPECT_EQ(NormalizeForMatch("黑色。"), "黑色");
}

TEST(ExtractTest, FindJsonObjectToleratesFencesAndProse) {
  auto j = FindJsonObject("Here:\n```json\n{\"a\": {\"b\": 1}}\n```\nbye");
  ASSERT_TRUE(j.has_value());
  EXPECT_EQ((*j)["a"]["b"], 1);
  EXPECT_FALSE(FindJsonObject("no braces").has_value());
  EXPECT_FALSE(FindJsonObject("{broken").has_value());
}

TEST(ExtractTest, IdempotentUnderPrettyPrinting) {
  const McqItem item = EnglishItem();
  const std::vector<std::string> answers = {"A",     "B. black formal suit", "white shirt",
                                            "(D)",   "Blue Jeans",           "none",
                                            "E",     "b",                    " C ",
                                            "A\nmore"};
  for (const auto& answer : answers) {
    const json j = {{"reasoning_in_English", "Some reasoning."}, {"final_answer", answer}};
    const Extraction compact = ExtractFinalAnswer(j.dump(), item);
    const Extraction pretty = ExtractFinalAnswer(j.dump(2), item);
    const Extraction wide = ExtractFinalAnswer(j.dump(4), item);
    EXPECT_EQ(compact.label, pretty.label) << answer;
    EXPECT_EQ(compact.label, wide.label) << answer;
  }
}

TEST(ExtractTest, TotalOnRandomBytes) {
  const McqItem item = EnglishItem();
  Rng rng(99);
  const std::string alphabet = "{}\":,ABCDabcd \n\\final_answer\x80\xff\xe4\xb8";
  for (int i = 0; i < 10000; ++i) {
    std::string raw(rng.UniformIndex(64), '\0');
    for (char& c : raw) {
      c = rng.Bernoulli(0.5) ? static_cast<char>(rng.UniformIndex(256))
                             : alphabet[rng.UniformIndex(alphabet.size())];
    }
    const Extraction e = ExtractFinalAnswer(raw, item);
    if (e.ok()) {
      EXPECT_TRUE(item.HasLabel(*e.label));
      EXPECT_NE(e.rule, ExtractionRule::kInvalid);
    } else {
      EXPECT_EQ(e.rule, ExtractionRule::kInvalid);
    }
  }
}

TEST(ExtractTest, ExpertLanguageExamplesAndFallbacks) {
  const std::vector<Language> all(AllLanguages().begin(), AllLanguages().end());
  EXPECT_EQ(ExtractExpertLanguage(R"({"expert_language":"Arabic"})", all), Language::kAr);
  EXPECT_EQ(ExtractExpertLanguage(R"({"expert_language":"Klingon"})", all), Language::kEn);
  EXPECT_EQ(ExtractExpertLanguage("garbage text", all), Language::kEn);
  EXPECT_EQ(ExtractExpertLanguage(R"({"expert_language": "turkish."})", all), Language::kTr);
  EXPECT_EQ(ExtractExpertLanguage("```json\n{\"expert_language\": \"[Hindi]\"}\n```", all),
            Language::kHi);

  bool fallback = false;
  EXPECT_EQ(ExtractExpertLanguage(R"({"expert_language":"Japanese"})",
                                  {Language::kEn, Language::kTr}, &fallback),
            Language::kEn);
  EXPECT_TRUE(fallback);
  EXPECT_EQ(ExtractExpertLanguage("junk", {Language::kTr, Language::kHi}, &fallback),
            Language::kHi);
  EXPECT_TRUE(fallback);
  EXPECT_EQ(ExtractExpertLanguage(R"({"expert_language":"Turkish"})",
                                  {Language::kTr, Language::kHi}, &fallback),
            Language::kTr);
  EXPECT_FALSE(fallback);
}

}  // namespace
}  // namespace lsk
