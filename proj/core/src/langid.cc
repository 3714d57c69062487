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

#include "lsk/langid.h"

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "lsk/error.h"
#include "utf8.h"

namespace lsk {
namespace {

enum class Script { kLatin, kCjk, kHangul, kThai, kDevanagari, kBengali, kArabic, kCyrillic, kOther };

bool InRange(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool IsKana(char32_t cp) {
  return InRange(cp, 0x3040, 0x30FF) || InRange(cp, 0x31F0, 0x31FF) ||
         InRange(cp, 0xFF66, 0xFF9F);
}

Script Classify(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
      InRange(cp, 0x00C0, 0x024F) || InRange(cp, 0x1E00, 0x1EFF)) {
    if (cp == 0x00D7 || cp == 0x00F7) return Script::kOther;
    return Script::kLatin;
  }
  if (InRange(cp, 0x4E00, 0x9FFF) || InRange(cp, 0x3400, 0x4DBF) ||
      InRange(cp, 0xF900, 0xFAFF) || IsKana(cp)) {
    return Script::kCjk;
  }
  if (InRange(cp, 0xAC00, 0xD7AF) || InRange(cp, 0x1100, 0x11FF) ||
      InRange(cp, 0x3130, 0x318F)) {
    return Script::kHangul;
  }
  if (InRange(cp, 0x0E00, 0x0E7F)) return Script::kThai;
  if (InRange(cp, 0x0900, 0x097F)) return Script::kDevanagari;
  if (InRange(cp, 0x0980, 0x09FF)) return Script::kBengali;
  if (InRange(cp, 0x0600, 0x06FF) || InRange(cp, 0x0750, 0x077F) ||
      InRange(cp, 0x08A0, 0x08FF) || InRange(cp, 0xFB50, 0xFDFF) ||
      InRange(cp, 0xFE70, 0xFEFC)) {
    return Script::kArabic;
  }
  if (InRange(cp, 0x0400, 0x04FF)) return Script::kCyrillic;
  return Script::kOther;
}

struct Profile {
  Language lang;
  std::vector<std::string> stopwords;
};

const std::vector<Profile>& LatinProfiles() {
  static const std::vector<Profile> kProfiles = {
      {Language::kEn,
       {"the", "and", "of", "to", "is", "in", "that", "it", "this", "for",
        "are", "was", "with", "as", "be", "on", "not", "they", "which", "by",
        "or", "have", "from", "but", "an", "would", "so", "because", "their",
        "most", "likely", "what", "there", "these", "can", "more"}},
      {Language::kFr,
       {"le", "les", "et", "des", "est", "un", "une", "du", "que", "qui",
        "dans", "pour", "pas", "sur", "ce", "il", "elle", "sont", "avec",
        "au", "aux", "mais", "ou", "cette", "ces", "nous", "vous", "plus",
        "être", "donc", "parce", "réponse", "souvent", "leur"}},
      {Language::kDe,
       {"der", "die", "das", "und", "ist", "nicht", "ein", "eine", "zu",
        "den", "von", "mit", "sich", "des", "auf", "für", "im", "dem", "es",
        "auch", "als", "werden", "wird", "sind", "oder", "aber", "dass",
        "bei", "nach", "sie", "wir", "ich", "diese", "daher", "antwort"}},
      {Language::kIt,
       {"il", "lo", "gli", "di", "che", "è", "un", "una", "per", "non",
        "sono", "della", "del", "nel", "con", "questo", "questa", "anche",
        "come", "più", "ma", "ci", "dei", "delle", "quindi", "perché",
        "essere", "risposta", "molto", "nella", "alla"}},
      {Language::kPt,
       {"os", "as", "de", "que", "do", "da", "em", "um", "uma", "para", "é",
        "com", "não", "no", "na", "por", "mais", "dos", "das", "se", "ao",
        "isso", "está", "são", "mas", "também", "pelo", "porque", "resposta",
        "muito", "você", "mais", "pela", "nas"}},
      {Language::kEs,
       {"el", "los", "las", "de", "que", "y", "en", "un", "una", "es", "por",
        "con", "no", "para", "del", "se", "al", "lo", "como", "más", "pero",
        "sus", "ya", "este", "esta", "porque", "son", "también", "muy",
        "respuesta", "hay", "está", "puede"}},
      {Language::kTr,
       {"ve", "bir", "bu", "da", "de", "için", "ile", "çok", "ne", "daha",
        "olarak", "gibi", "ama", "mi", "var", "yok", "olan", "değil", "kadar",
        "sonra", "her", "şey", "veya", "çünkü", "cevap", "olduğu", "ise",
        "genellikle", "en", "doğru", "bunun", "olduğunu"}},
      {Language::kVi,
       {"của", "và", "là", "có", "không", "được", "những", "các", "trong",
        "cho", "người", "này", "một", "với", "để", "đã", "khi", "thì", "từ",
        "như", "cũng", "nhưng", "về", "nên", "vì", "đó", "rất", "câu", "trả",
        "lời", "thường"}},
  };
  return kProfiles;
}

// Letters that occur in only one of the Latin-script candidates.
std::optional<Language> DistinctiveLetter(char32_t cp) {
  switch (cp) {
    case 0x0131: case 0x011F: case 0x015F: case 0x011E: case 0x015E:
      return Language::kTr;  // ı ğ ş
    case 0x00DF:
      return Language::kDe;  // ß
    case 0x00E3: case 0x00F5: case 0x00C3: case 0x00D5:
      return Language::kPt;  // ã õ
    case 0x00F1: case 0x00D1:
      return Language::kEs;  // ñ
    case 0x0111: case 0x0110: case 0x01A1: case 0x01A0: case 0x01B0: case 0x01AF:
      return Language::kVi;  // đ ơ ư
    default:
      break;
  }
  if (InRange(cp, 0x1EA0, 0x1EF9)) return Language::kVi;
  return std::nullopt;
}

std::optional<Language> DetectLatin(std::string_view text) {
  static const auto kIndex = [] {
    std::unordered_map<std::string, std::vector<Language>> index;
    for (const auto& profile : LatinProfiles()) {
      for (const auto& word : profile.stopwords) {
        auto& langs = index[word];
        if (langs.empty() || langs.back() != profile.lang) langs.push_back(profile.lang);
      }
    }
    return index;
  }();

  std::array<double, kLanguageCount> score{};
  auto flush = [&](std::string& word) {
    if (word.empty()) return;
    if (auto it = kIndex.find(word); it != kIndex.end()) {
      // Words shared by several profiles split their weight.
      const double weight = 1.0 / static_cast<double>(it->second.size());
      for (Language lang : it->second) score[static_cast<std::size_t>(lang)] += weight;
    }
    word.clear();
  };

  std::string word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::DecodeNext(text, pos);
    if (Classify(cp) == Script::kLatin) {
      if (auto lang = DistinctiveLetter(cp)) {
        score[static_cast<std::size_t>(*lang)] += 0.5;
      }
      utf8::Append(word, utf8::FoldCase(cp));
    } else {
      flush(word);
    }
  }
  flush(word);

  std::optional<Language> best;
  double best_score = 0.0;
  for (Language lang : AllLanguages()) {
    const double s = score[static_cast<std::size_t>(lang)];
    if (s > best_score) {
      best = lang;
      best_score = s;
    }
  }
  return best;
}

}  // namespace

std::optional<Language> ScriptStopwordDetector::Detect(std::string_view text) const {
  std::array<std::size_t, 9> counts{};
  std::size_t kana = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::DecodeNext(text, pos);
    const Script script = Classify(cp);
    ++counts[static_cast<std::size_t>(script)];
    if (IsKana(cp)) ++kana;
  }
  counts[static_cast<std::size_t>(Script::kOther)] = 0;

  std::size_t best = 0;
  for (std::size_t s = 1; s < counts.size(); ++s) {
    if (counts[s] > counts[best]) best = s;
  }
  if (counts[best] == 0) return std::nullopt;
  switch (static_cast<Script>(best)) {
    case Script::kLatin: return DetectLatin(text);
    case Script::kCjk: return kana > 0 ? Language::kJa : Language::kZh;
    case Script::kHangul: return Language::kKo;
    case Script::kThai: return Language::kTh;
    case Script::kDevanagari: return Language::kHi;
    case Script::kBengali: return Language::kBn;
    case Script::kArabic: return Language::kAr;
    case Script::kCyrillic: return Language::kRu;
    case Script::kOther: break;
  }
  return std::nullopt;
}

bool VerifyOutputLanguage(std::string_view reasoning_text, Language expected,
                          const LanguageDetector& detector) {
  if (reasoning_text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorKind::kInvalidArgument, "reasoning text is empty");
  }
  auto detected = detector.Detect(reasoning_text);
  return detected.has_value() && *detected == expected;
}

}  // namespace lsk
