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

// Minimal UTF-8 helpers shared by answer extraction and language detection.

#include <cstddef>
#include <string>
#include <string_view>

namespace lsk::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the code point at `pos` and advances `pos`. Malformed sequences
// yield U+FFFD and consume one byte.
char32_t DecodeNext(std::string_view s, std::size_t& pos);

void Append(std::string& out, char32_t cp);

bool IsSpace(char32_t cp);
bool IsPunctuation(char32_t cp);  // includes ASCII symbols
char32_t FoldCase(char32_t cp);

}  // namespace lsk::utf8
