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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/language.h"

namespace lsk {

// Which step of the answer-matching cascade produced the result.
enum class ExtractionRule {
  kJsonLetter,          // final_answer starts with a choice letter
  kJsonChoiceText,      // final_answer equals one choice text after normalizing
  kLastLineLetter,      // same two checks applied to the raw last line
  kLastLineChoiceText,
  kInvalid,
};

std::string_view ExtractionRuleName(ExtractionRule rule);

struct Extraction {
  std::optional<char> label;
  ExtractionRule rule = ExtractionRule::kInvalid;

  bool ok() const { return label.has_value(); }
};

// Locates the outermost JSON object in `raw`, tolerating surrounding prose
// and markdown code fences. Returns nullopt when no object parses.
std::optional<nlohmann::json> FindJsonObject(std::string_view raw);

// Reads a string-valued field: first from a parsed JSON object, then by a
// lenient `"key": "value"` / `"key": value` scan of the raw text.
std::optional<std::string> ReadJsonStringField(std::string_view raw,
                                               std::string_view key);

// Case-folds, then strips punctuation and whitespace. Case folding covers
// ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
std::string NormalizeForMatch(std::string_view text);

// Deterministic answer-matching cascade; first hit wins:
//   1. read `final_answer` from the outermost JSON object;
//   2. accept it if its first alphabetic character is a valid choice letter
//      followed by end of text, punctuation or whitespace;
//   3. else accept the unique choice whose normalized text equals it;
//   4. else apply 2-3 to the last non-blank line of the raw text;
//   5. else invalid.
// Total: never throws, for any byte string.
Extraction ExtractFinalAnswer(std::string_view raw, const McqItem& item);

// Reads `expert_language` and maps its English name to a language in
// `allowed`. Anything else yields English, or the canonically first allowed
// language when English is not allowed. Never throws for non-empty `allowed`.
Language ExtractExpertLanguage(std::string_view raw,
                               const std::vector<Language>& allowed);

// Same, reporting whether the fallback was used.
Language ExtractExpertLanguage(std::string_view raw,
                               const std::vector<Language>& allowed,
                               bool* used_fallback);

}  // namespace lsk
