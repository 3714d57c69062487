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

#include <optional>

#include "lsk/extract.h"

namespace lsk {
namespace {

bool IsBlank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Returns the translated text, or nullopt after one re-ask.
std::optional<std::string> TranslateField(const std::string& text, Language target,
                                          ChatClient& client, int& calls) {
  const PromptText prompt = BuildTranslationPrompt(text, target);
  const std::string key = TranslationKey(target);
  for (int ask = 0; ask < 2; ++ask) {
    ++calls;
    ChatResult reply;
    try {
      reply = client.Complete(prompt);
    } catch (const EndpointError& e) {
      if (e.kind() != ErrorKind::kTransport) throw;
      return std::nullopt;
    }
    auto value = ReadJsonStringField(reply.text, key);
    if (value && !IsBlank(*value)) return value;
  }
  return std::nullopt;
}

}  // namespace

TranslationOutcome TranslateItem(const McqItem& item, Language target,
                                 ChatClient& client) {
  TranslationOutcome outcome;
  outcome.item = item;
  if (target == item.source_language) return outcome;

  outcome.item.source_language = target;
  if (auto q = TranslateField(item.question, target, client, outcome.calls)) {
    outcome.item.question = *q;
  } else {
    outcome.failed_fields.push_back("question");
  }
  for (auto& choice : outcome.item.choices) {
    if (auto t = TranslateField(choice.text, target, client, outcome.calls)) {
      choice.text = *t;
    } else {
      outcome.failed_fields.push_back(std::string("choice:") + choice.label);
    }
  }
  outcome.complete = outcome.failed_fields.empty();
  return outcome;
}

}  // namespace lsk
