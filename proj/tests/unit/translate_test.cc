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

#include "lsk/translate.h"

#include <gtest/gtest.h>

#include <atomic>

#include <nlohmann/json.hpp>

#include "support/stub_server.h"

namespace lsk {
namespace {

using nlohmann::json;
using testing::ChatReply;
using testing::FakeTransport;
using testing::PromptOf;
using testing::TestEndpoint;

McqItem Item() {
  return MakeItem(DatasetId::kBlend, "What do people wear?", {"suit", "dress", "jeans"}, 'C');
}

TEST(TranslateTest, TranslatesFieldsSeparatelyAndKeepsAnswerKey) {
  auto transport = std::make_shared<FakeTransport>(testing::ScriptedModel());
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  const McqItem source = Item();
  TranslationOutcome out = TranslateItem(source, Language::kTr, client);
  EXPECT_TRUE(out.complete);
  EXPECT_EQ(out.calls, 4);
  EXPECT_EQ(transport->request_count(), 4u);
  EXPECT_EQ(out.item.item_id, source.item_id);
  EXPECT_EQ(out.item.gold_label, source.gold_label);
  EXPECT_EQ(out.item.source_language, Language::kTr);
  EXPECT_EQ(out.item.question, "[tr] What do people wear?");
  ASSERT_EQ(out.item.choices.size(), 3u);
  EXPECT_EQ(out.item.choices[1].label, 'B');
  EXPECT_EQ(out.item.choices[1].text, "[tr] dress");
}

TEST(TranslateTest, SameLanguageIsACopyWithoutCalls) {
  auto transport = std::make_shared<FakeTransport>(testing::ScriptedModel());
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  TranslationOutcome out = TranslateItem(Item(), Language::kEn, client);
  EXPECT_EQ(out.item, Item());
  EXPECT_EQ(out.calls, 0);
  EXPECT_EQ(transport->request_count(), 0u);
}

TEST(TranslateTest, MissingKeyIsReaskedOnceThenLeftUntranslated) {
  auto transport = std::make_shared<FakeTransport>([](const std::string&, const std::string& body) {
    const std::string prompt = PromptOf(body);
    if (prompt.find("\"dress\"") != std::string::npos) {
      return std::pair<int, std::string>(200, ChatReply("I cannot translate that."));
    }
    return testing::ScriptedModel()("/chat/completions", body);
  });
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  TranslationOutcome out = TranslateItem(Item(), Language::kHi, client);
  EXPECT_FALSE(out.complete);
  EXPECT_EQ(out.failed_fields, std::vector<std::string>{"choice:B"});
  EXPECT_EQ(out.calls, 5);
  EXPECT_EQ(out.item.choices[1].text, "dress");
  EXPECT_EQ(out.item.choices[0].text, "[hi] suit");
  EXPECT_EQ(out.item.gold_label, 'C');
}

TEST(TranslateTest, TransportFailureMarksFieldIncomplete) {
  auto transport = std::make_shared<FakeTransport>([](const std::string&, const std::string& body) {
    if (PromptOf(body).find("What do people wear?") != std::string::npos) {
      return std::pair<int, std::string>(503, "");
    }
    return testing::ScriptedModel()("/chat/completions", body);
  });
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  TranslationOutcome out = TranslateItem(Item(), Language::kFr, client);
  EXPECT_FALSE(out.complete);
  EXPECT_EQ(out.failed_fields, std::vector<std::string>{"question"});
  EXPECT_EQ(out.item.question, "What do people wear?");
}

TEST(TranslateTest, AuthFailurePropagates) {
  auto transport = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&) { return std::pair<int, std::string>(401, ""); });
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  EXPECT_THROW(TranslateItem(Item(), Language::kFr, client), EndpointError);
}

// The answer-key bijection holds for every target language.
TEST(TranslateTest, GoldPreservedForAllTargets) {
  auto transport = std::make_shared<FakeTransport>(testing::ScriptedModel());
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  for (Language lang : AllLanguages()) {
    TranslationOutcome out = TranslateItem(Item(), lang, client);
    EXPECT_EQ(out.item.gold_label, Item().gold_label);
    EXPECT_EQ(out.item.choices.size(), Item().choices.size());
    EXPECT_NO_THROW(Validate(out.item));
  }
}

}  // namespace
}  // namespace lsk
