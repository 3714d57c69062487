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

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/language.h"

namespace lsk {

enum class RecordStatus { kOk, kInvalidOutput, kTransportError };

std::string_view RecordStatusName(RecordStatus status);
RecordStatus ParseRecordStatus(std::string_view name);

// One cached model call.
struct InferenceRecord {
  std::string item_id;
  Language language = Language::kEn;
  std::string model_name;
  std::string prompt_hash;
  std::string raw_output;
  std::optional<char> extracted_label;
  RecordStatus status = RecordStatus::kOk;
  int attempt_count = 1;
  std::string created_at;  // ISO-8601 UTC

  bool operator==(const InferenceRecord&) const = default;
};

// SHA-256 over model name and prompt body.
std::string PromptHash(std::string_view body, std::string_view model_name);

// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string UtcTimestamp();

nlohmann::json ToJson(const InferenceRecord& rec);
InferenceRecord InferenceRecordFromJson(const nlohmann::json& j);

// Throws Error(kInvalidArgument) when `rec` breaks its invariants.
void Validate(const InferenceRecord& rec);

enum class RecordOutcome {
  kAppended,
  kDuplicate,  // same key and same raw output; dropped
  kConflict,   // same key, different raw output; first write kept
};

// Append-only store of InferenceRecords backed by `<dir>/records.jsonl`,
// with a provenance sidecar `<dir>/manifest.json`.
//
// Records are keyed by (item_id, language, model_name, prompt_hash); the
// first write of a key wins. transport_error records are appended for the
// audit trail but never claim a key, so a later successful call for the same
// prompt is still stored. Record() is safe to call from several threads.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path dir);
  ~RunStore();
  RunStore(const RunStore&) = delete;
  RunStore& operator=(const RunStore&) = delete;

  // When `prompt_body` is given, the store also checks that no other body
  // produced the same prompt_hash in this run (throws Error(kInvariant)).
  RecordOutcome Record(const InferenceRecord& rec,
                       std::optional<std::string_view> prompt_body = std::nullopt);

  // Flushes appended lines to stable storage.
  void Sync();

  // Copy of every record appended so far, in write order.
  std::vector<InferenceRecord> Snapshot() const;

  std::size_t size() const;
  std::size_t conflict_count() const;
  // Lines in records.jsonl that failed to parse on open and were skipped.
  std::size_t corrupt_line_count() const { return corrupt_lines_; }

  void WriteManifest(const nlohmann::json& manifest) const;
  std::optional<nlohmann::json> ReadManifest() const;

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path records_path() const { return dir_ / "records.jsonl"; }

 private:
  static std::string Key(const InferenceRecord& rec);

  std::filesystem::path dir_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::vector<InferenceRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;  // key -> records_ slot
  std::unordered_map<std::string, std::uint64_t> body_fingerprints_;
  std::size_t conflicts_ = 0;
  std::size_t corrupt_lines_ = 0;
};

}  // namespace lsk
