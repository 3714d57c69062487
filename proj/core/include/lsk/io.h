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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace lsk {

// Hex-encoded SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

// 64-bit FNV-1a; used as an independent second hash for collision checks.
std::uint64_t Fnv1a64(std::string_view data);

// Reads a whole file. Throws Error(kNotFound / kIo).
std::string ReadFile(const std::filesystem::path& path);

// Writes `contents` to a sibling temp file, fsyncs it, then renames over
// `path`. Readers never observe a partially written file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

// Calls `fn(line_number, line)` for every non-blank line (1-based numbers).
void ForEachLine(const std::filesystem::path& path,
                 const std::function<void(std::size_t, std::string_view)>& fn);

// Replaces ${NAME} with the value of environment variable NAME. Unset
// variables expand to the empty string.
std::string InterpolateEnv(std::string_view text);

}  // namespace lsk
