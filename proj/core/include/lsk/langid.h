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

#include <memory>
#include <optional>
#include <string_view>

#include "lsk/language.h"

namespace lsk {

// Identifies the language of a piece of model reasoning. Implementations
// return nullopt when the text matches no supported language and throw
// lsk::Error when the detector itself fails.
class LanguageDetector {
 public:
  virtual ~LanguageDetector() = default;
  virtual std::optional<Language> Detect(std::string_view text) const = 0;
};

// Bundled detector. Non-Latin scripts decide directly (Han without kana is
// Chinese, any kana is Japanese, Hangul Korean, Thai, Devanagari Hindi,
// Bengali, Arabic, Cyrillic Russian). Latin-script text is scored against
// per-language stopword profiles for en, fr, de, it, pt, es, tr, vi.
class ScriptStopwordDetector final : public LanguageDetector {
 public:
  std::optional<Language> Detect(std::string_view text) const override;
};

// True iff `detector` identifies `reasoning_text` as `expected`. Throws
// Error(kInvalidArgument) on empty text; detector failures propagate.
bool VerifyOutputLanguage(std::string_view reasoning_text, Language expected,
                          const LanguageDetector& detector);

}  // namespace lsk
