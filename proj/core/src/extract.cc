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

#include <algorithm>

#include "utf8.h"

namespace lsk {
namespace {

using nlohmann::json;

// End index (inclusive) of the object opened at `open`, honoring strings.
std::optional<std::size_t> MatchBrace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

std::optional<json> TryParseObject(std::string_view s) {
  json j = json::parse(s, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::string_view TrimAscii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

// Decodes a JSON string body (between quotes) leniently.
std::string UnescapeLenient(std::string_view body) {
  json j = json::parse("\"" + std::string(body) + "\"", nullptr, false);
  if (!j.is_discarded() && j.is_string()) return j.get<std::string>();
  return std::string(body);
}

// Scans for `"key"` followed by ':' and returns the raw value text.
std::optional<std::string> ScanField(std::string_view raw, std::string_view key) {
  const std::string needle = "\"" + std::string(key) + "\"";
  std::size_t pos = 0;
  while ((pos = raw.find(needle, pos)) != std::string_view::npos) {
    std::size_t i = pos + needle.size();
    while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
    if (i >= raw.size() || raw[i] != ':') {
      pos += needle.size();
      continue;
    }
    ++i;
    while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' ||
                              raw[i] == '\n' || raw[i] == '\r')) {
      ++i;
    }
    if (i < raw.size() && raw[i] == '"') {
      std::size_t j = i + 1;
      bool escaped = false;
      for (; j < raw.size(); ++j) {
        if (escaped) {
          escaped = false;
        } else if (raw[j] == '\\') {
          escaped = true;
        } else if (raw[j] == '"') {
          break;
        }
      }
      return UnescapeLenient(raw.substr(i + 1, j - i - 1));
    }
    // Unquoted value: up to the end of the line or the closing brace.
    std::size_t j = i;
    while (j < raw.size() && raw[j] != '\n' && raw[j] != '}') ++j;
    std::string_view value = TrimAscii(raw.substr(i, j - i));
    while (!value.empty() && (value.back() == ',')) value.remove_suffix(1);
    value = TrimAscii(value);
    if (value.empty()) return std::nullopt;
    return std::string(value);
  }
  return std::nullopt;
}

// Rule 2: first alphabetic character is a choice letter followed by end,
// punctuation or whitespace.
std::optional<char> LeadingChoiceLetter(std::string_view value,
                                        const McqItem& item) {
  std::size_t pos = 0;
  while (pos < value.size()) {
    const char32_t cp = utf8::DecodeNext(value, pos);
    const bool ascii_alpha =
        (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
    const bool other_alpha = cp >= 0x80 && !utf8::IsSpace(cp) &&
                             !utf8::IsPunctuation(cp) && cp != utf8::kReplacement;
    if (!ascii_alpha && !other_alpha) continue;
    if (!(cp >= 'A' && cp <= 'Z')) return std::nullopt;
    const char letter = static_cast<char>(cp);
    if (!item.HasLabel(letter)) return std::nullopt;
    if (pos >= value.size()) return letter;
    std::size_t next_pos = pos;
    const char32_t next = utf8::DecodeNext(value, next_pos);
    if (utf8::IsSpace(next) || utf8::IsPunctuation(next)) return letter;
    return std::nullopt;
  }
  return std::nullopt;
}

// Rule 3: unique normalized choice-text match.
std::optional<char> MatchChoiceText(std::string_view value, const McqItem& item) {
  const std::string needle = NormalizeForMatch(value);
  if (needle.empty()) return std::nullopt;
  std::optional<char> found;
  for (const auto& choice : item.choices) {
    if (NormalizeForMatch(choice.text) == needle) {
      if (found) return std::nullopt;
      found = choice.label;
    }
  }
  return found;
}

std::string_view LastNonBlankLine(std::string_view raw) {
  while (!raw.empty()) {
    std::size_t nl = raw.rfind('\n');
    std::string_view line =
        nl == std::string_view::npos ? raw : raw.substr(nl + 1);
    line = TrimAscii(line);
    if (!line.empty()) return line;
    if (nl == std::string_view::npos) break;
    raw = raw.substr(0, nl);
  }
  return {};
}

}  // namespace

std::string_view ExtractionRuleName(ExtractionRule rule) {
  switch (rule) {
    case ExtractionRule::kJsonLetter: return "json_letter";
    case ExtractionRule::kJsonChoiceText: return "json_choice_text";
    case ExtractionRule::kLastLineLetter: return "last_line_letter";
    case ExtractionRule::kLastLineChoiceText: return "last_line_choice_text";
    case ExtractionRule::kInvalid: return "invalid";
  }
  return "invalid";
}

std::optional<json> FindJsonObject(std::string_view raw) {
  const std::size_t first = raw.find('{');
  if (first == std::string_view::npos) return std::nullopt;
  if (auto end = MatchBrace(raw, first)) {
    if (auto j = TryParseObject(raw.substr(first, *end - first + 1))) return j;
  }
  const std::size_t last = raw.rfind('}');
  if (last != std::string_view::npos && last > first) {
    if (auto j = TryParseObject(raw.substr(first, last - first + 1))) return j;
  }
  // Fall back to later objects (e.g. prose containing a stray brace).
  for (std::size_t open = raw.find('{', first + 1);
       open != std::string_view::npos; open = raw.find('{', open + 1)) {
    if (auto end = MatchBrace(raw, open)) {
      if (auto j = TryParseObject(raw.substr(open, *end - open + 1))) return j;
    }
  }
  return std::nullopt;
}

std::optional<std::string> ReadJsonStringField(std::string_view raw,
                                               std::string_view key) {
  if (auto obj = FindJsonObject(raw)) {
    auto it = obj->find(key);
    if (it != obj->end()) {
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number() || it->is_boolean()) return it->dump();
    }
  }
  return ScanField(raw, key);
}

std::string NormalizeForMatch(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::DecodeNext(text, pos);
    if (utf8::IsSpace(cp) || utf8::IsPunctuation(cp)) continue;
    utf8::Append(out, utf8::FoldCase(cp));
  }
  return out;
}

Extraction ExtractFinalAnswer(std::string_view raw, const McqItem& item) {
  if (auto value = ReadJsonStringField(raw, "final_answer")) {
    if (auto letter = LeadingChoiceLetter(*value, item)) {
      return {letter, ExtractionRule::kJsonLetter};
    }
    if (auto letter = MatchChoiceText(*value, item)) {
      return {letter, ExtractionRule::kJsonChoiceText};
    }
  }
  const std::string_view line = LastNonBlankLine(raw);
  if (!line.empty()) {
    if (auto letter = LeadingChoiceLetter(line, item)) {
      return {letter, ExtractionRule::kLastLineLetter};
    }
    if (auto letter = MatchChoiceText(line, item)) {
      return {letter, ExtractionRule::kLastLineChoiceText};
    }
  }
  return {std::nullopt, ExtractionRule::kInvalid};
}

Language ExtractExpertLanguage(std::string_view raw,
                               const std::vector<Language>& allowed,
                               bool* used_fallback) {
  auto fallback = [&] {
    if (used_fallback) *used_fallback = true;
    if (allowed.empty() ||
        std::find(allowed.begin(), allowed.end(), Language::kEn) != allowed.end()) {
      return Language::kEn;
    }
    return *std::min_element(allowed.begin(), allowed.end(), CanonicalLess);
  };
  if (used_fallback) *used_fallback = false;
  auto value = ReadJsonStringField(raw, "expert_language");
  if (!value) return fallback();
  // Strip decoration such as quotes, brackets or a trailing period.
  std::string_view name = *value;
  auto is_decor = [](char c) {
    return c == ' ' || c == '"' || c == '\'' || c == '.' || c == ',' ||
           c == '[' || c == ']' || c == '<' || c == '>' || c == '\n' ||
           c == '\r' || c == '\t' || c == '*';
  };
  while (!name.empty() && is_decor(name.front())) name.remove_prefix(1);
  while (!name.empty() && is_decor(name.back())) name.remove_suffix(1);
  auto lang = LanguageFromEnglishName(name);
  if (!lang || std::find(allowed.begin(), allowed.end(), *lang) == allowed.end()) {
    return fallback();
  }
  return *lang;
}

Language ExtractExpertLanguage(std::string_view raw,
                               const std::vector<Language>& allowed) {
  return ExtractExpertLanguage(raw, allowed, nullptr);
}

}  // namespace lsk
