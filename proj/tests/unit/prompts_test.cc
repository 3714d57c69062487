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

#include "lsk/prompts.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "lsk/error.h"
#include "lsk/io.h"

namespace lsk {
namespace {

namespace fs = std::filesystem;

McqItem SampleItem() {
  return MakeItem(DatasetId::kBlend, "What do people wear to a wedding?",
                  {"red dress", "black formal suit", "white shirt", "blue jeans"}, 'B');
}

TEST(PromptsTest, EnglishReasoningPromptLayout) {
  PromptText p = BuildReasoningPrompt(SampleItem(), Language::kEn, TemplateSet::BuiltIn());
  EXPECT_EQ(p.body,
            "Question: What do people wear to a wedding?\n"
            "Answer choices:\n"
            "A. red dress\n"
            "B. black formal suit\n"
            "C. white shirt\n"
            "D. blue jeans\n"
            "\n"
            "Think about it in English, and then select one of the answer choices. Fill in the "
            "JSON below.\n"
            "{\n"
            "  \"reasoning_in_English\": \"<your reasoning steps in English>\",\n"
            "  \"final_answer\": \"<output answer here>\"\n"
            "}\n");
  EXPECT_EQ(p.expected_json_keys,
            (std::vector<std::string>{"reasoning_in_English", "final_answer"}));
  EXPECT_EQ(p.language, Language::kEn);
}

TEST(PromptsTest, TurkishReasoningPromptUsesLocalizedPieces) {
  PromptText p = BuildReasoningPrompt(SampleItem(), Language::kTr, TemplateSet::BuiltIn());
  EXPECT_EQ(p.body.rfind("Soru: ", 0), 0u);
  EXPECT_NE(p.body.find("\nCevap seçenekleri:\nA. red dress\n"), std::string::npos);
  EXPECT_NE(p.body.find("\"reasoning_in_Turkish\": "), std::string::npos);
  EXPECT_NE(p.body.find("\"final_answer\": "), std::string::npos);
  EXPECT_EQ(ReasoningKey(Language::kTr), "reasoning_in_Turkish");
}

TEST(PromptsTest, EveryLanguageHasABuiltInTemplate) {
  const TemplateSet set = TemplateSet::BuiltIn();
  for (Language lang : AllLanguages()) {
    ASSERT_NE(set.Find(lang), nullptr) << Code(lang);
    PromptText p = BuildReasoningPrompt(SampleItem(), lang, set);
    EXPECT_NE(p.body.find(ReasoningKey(lang)), std::string::npos);
  }
}

TEST(PromptsTest, MissingTemplateIsNotFound) {
  try {
    BuildReasoningPrompt(SampleItem(), Language::kEn, TemplateSet::Empty());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotFound);
  }
}

TEST(PromptsTest, DirectoryRoundTripAndOverride) {
  const fs::path dir = fs::temp_directory_path() / "lsk_prompts_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  TemplateSet::BuiltIn().WriteDirectory(dir);
  TemplateSet loaded = TemplateSet::Empty();
  loaded.LoadDirectory(dir);
  EXPECT_EQ(loaded.Hash(), TemplateSet::BuiltIn().Hash());

  ReasoningTemplate custom = *TemplateSet::BuiltIn().Find(Language::kEn);
  custom.instruction = "Reason in English.";
  TemplateSet changed = TemplateSet::BuiltIn();
  changed.Set(Language::kEn, custom);
  EXPECT_NE(changed.Hash(), TemplateSet::BuiltIn().Hash());

  WriteFileAtomic(dir / "fr.json", "{not json");
  TemplateSet broken = TemplateSet::BuiltIn();
  EXPECT_THROW(broken.LoadDirectory(dir), Error);
}

TEST(PromptsTest, ShippedTemplateDirectoryMatchesBuiltIns) {
  TemplateSet shipped = TemplateSet::Empty();
  shipped.LoadDirectory(fs::path(LSK_SOURCE_DATA_DIR) / "templates");
  for (Language lang : AllLanguages()) {
    ASSERT_NE(shipped.Find(lang), nullptr) << Code(lang);
    EXPECT_EQ(*shipped.Find(lang), *TemplateSet::BuiltIn().Find(lang)) << Code(lang);
  }
}

TEST(PromptsTest, SelectionPromptListsConfiguredLanguagesInFixedOrder) {
  PromptText p = BuildSelectionPrompt(SampleItem(),
                                      {Language::kEn, Language::kZh, Language::kTr, Language::kFr});
  EXPECT_NE(p.body.find("[Chinese, English, French, Turkish]"), std::string::npos);
  EXPECT_NE(p.body.find("Question: What do people wear to a wedding?\n"), std::string::npos);
  EXPECT_NE(p.body.find("\"expert_language\""), std::string::npos);
  EXPECT_EQ(p.body.find("red dress"), std::string::npos);
  EXPECT_THROW(BuildSelectionPrompt(SampleItem(), {}), Error);
}

TEST(PromptsTest, TranslationPromptNamesTargetKey) {
  PromptText p = BuildTranslationPrompt("Hello there", Language::kTr);
  EXPECT_NE(p.body.find("into Turkish: \"Hello there\""), std::string::npos);
  EXPECT_NE(p.body.find("\"Turkish_translation\""), std::string::npos);
  EXPECT_EQ(p.expected_json_keys, std::vector<std::string>{"Turkish_translation"});
  EXPECT_THROW(BuildTranslationPrompt("   ", Language::kTr), Error);
}

}  // namespace
}  // namespace lsk
