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

#include <algorithm>
#include <cctype>

#include "lsk/error.h"

namespace lsk {
namespace {

struct LanguageInfo {
  std::string_view code;
  std::string_view name;
};

constexpr std::array<LanguageInfo, kLanguageCount> kInfo = {{
    {"en", "English"},
    {"ar", "Arabic"},
    {"bn", "Bengali"},
    {"zh", "Chinese"},
    {"fr", "French"},
    {"de", "German"},
    {"hi", "Hindi"},
    {"it", "Italian"},
    {"ja", "Japanese"},
    {"ko", "Korean"},
    {"pt", "Portuguese"},
    {"ru", "Russian"},
    {"es", "Spanish"},
    {"th", "Thai"},
    {"tr", "Turkish"},
    {"vi", "Vietnamese"},
}};

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

const std::array<Language, kLanguageCount>& AllLanguages() {
  static const std::array<Language, kLanguageCount> kAll = [] {
    std::array<Language, kLanguageCount> all{};
    for (std::size_t i = 0; i < kLanguageCount; ++i) {
      all[i] = static_cast<Language>(i);
    }
    return all;
  }();
  return kAll;
}

std::string_view Code(Language lang) {
  return kInfo[static_cast<std::size_t>(lang)].code;
}

std::string_view EnglishName(Language lang) {
  return kInfo[static_cast<std::size_t>(lang)].name;
}

std::optional<Language> TryParseLanguage(std::string_view code) {
  code = Trim(code);
  for (std::size_t i = 0; i < kLanguageCount; ++i) {
    if (EqualsIgnoreCase(kInfo[i].code, code)) {
      return static_cast<Language>(i);
    }
  }
  return std::nullopt;
}

Language ParseLanguage(std::string_view code) {
  if (auto lang = TryParseLanguage(code)) return *lang;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown language code '" + std::string(code) + "'");
}

std::optional<Language> LanguageFromEnglishName(std::string_view name) {
  name = Trim(name);
  for (std::size_t i = 0; i < kLanguageCount; ++i) {
    if (EqualsIgnoreCase(kInfo[i].name, name)) {
      return static_cast<Language>(i);
    }
  }
  return std::nullopt;
}

std::vector<Language> ParseLanguageList(std::string_view csv) {
  std::vector<Language> out;
  while (!csv.empty()) {
    auto comma = csv.find(',');
    auto token = Trim(csv.substr(0, comma));
    if (!token.empty()) {
      Language lang = ParseLanguage(token);
      if (std::find(out.begin(), out.end(), lang) != out.end()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "duplicate language '" + std::string(token) + "'");
      }
      out.push_back(lang);
    }
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return out;
}

std::string JoinCodes(const std::vector<Language>& langs) {
  std::string out;
  for (Language lang : langs) {
    if (!out.empty()) out += ',';
    out += Code(lang);
  }
  return out;
}

std::vector<Language> CanonicalSorted(std::vector<Language> langs) {
  std::sort(langs.begin(), langs.end(), CanonicalLess);
  return langs;
}

}  // namespace lsk
