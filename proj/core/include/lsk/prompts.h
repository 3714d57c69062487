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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lsk/dataset.h"
#include "lsk/language.h"

namespace lsk {

struct PromptText {
  std::string body;
  std::vector<std::string> expected_json_keys;
  Language language = Language::kEn;
};

// Localized pieces of the chain-of-thought prompt for one language.
struct ReasoningTemplate {
  std::string question_label;   // "Question:"
  std::string choices_label;    // "Answer choices:"
  std::string instruction;      // "Think about it in English, and then ..."
  std::string reasoning_placeholder;
  std::string answer_placeholder;

  bool operator==(const ReasoningTemplate&) const = default;
};

// Reasoning templates keyed by language. Starts from the built-in set;
// a template directory of `<code>.json` files can override entries.
class TemplateSet {
 public:
  static TemplateSet BuiltIn();
  static TemplateSet Empty() { return TemplateSet(); }

  // Reads every `<code>.json` in `dir`, replacing built-in entries.
  // Unknown file stems are ignored; malformed files throw.
  void LoadDirectory(const std::filesystem::path& dir);

  // Writes one `<code>.json` per present language.
  void WriteDirectory(const std::filesystem::path& dir) const;

  void Set(Language lang, ReasoningTemplate tmpl);
  const ReasoningTemplate* Find(Language lang) const;

  // SHA-256 over every template in canonical order.
  std::string Hash() const;

 private:
  std::array<std::optional<ReasoningTemplate>, kLanguageCount> templates_;
};

// The JSON key holding the reasoning text, e.g. "reasoning_in_Turkish".
std::string ReasoningKey(Language lang);

// `item` must already be in language `lang`. Throws Error(kNotFound) when the
// set has no template for `lang`.
PromptText BuildReasoningPrompt(const McqItem& item, Language lang,
                                const TemplateSet& templates);

// Lists candidate languages in the order the selection prompt has always
// used, restricted to `languages`. Throws on an empty list.
PromptText BuildSelectionPrompt(const McqItem& item,
                                const std::vector<Language>& languages);

// Throws on empty text.
PromptText BuildTranslationPrompt(const std::string& text, Language target);

std::string TranslationKey(Language target);  // "Turkish_translation"

}  // namespace lsk
