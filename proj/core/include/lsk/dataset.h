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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsk/language.h"

namespace lsk {

enum class DatasetId { kBlend, kCultureAtlas, kSocialIqa, kCustom };

std::string_view DatasetName(DatasetId id);  // "blend", "culture_atlas", ...
DatasetId ParseDatasetId(std::string_view name);

struct Choice {
  char label = 'A';
  std::string text;

  bool operator==(const Choice&) const = default;
};

// One multiple-choice question. Choice labels run A, B, C, ... without gaps.
struct McqItem {
  std::string item_id;
  DatasetId dataset_id = DatasetId::kCustom;
  std::string question;
  std::vector<Choice> choices;
  char gold_label = 'A';
  std::optional<std::string> country;
  Language source_language = Language::kEn;
  // The `id` field from the input file when it differs from item_id.
  std::optional<std::string> source_id;

  bool HasLabel(char label) const;
  bool operator==(const McqItem&) const = default;
};

// Throws Error(kInvalidArgument) describing the first violated invariant.
void Validate(const McqItem& item);

// dataset name + "/" + first 16 hex chars of SHA-256 over question, choice
// texts and gold label.
std::string ContentItemId(DatasetId dataset, std::string_view question,
                          const std::vector<Choice>& choices, char gold);

// Builds a validated item with labels assigned positionally from A.
McqItem MakeItem(DatasetId dataset, std::string question,
                 std::vector<std::string> choice_texts, char gold,
                 std::optional<std::string> country = std::nullopt);

struct ClaimRecord {
  std::string country;
  std::string claim;
  bool truth = false;
};

struct SplitSpec {
  std::uint64_t seed = 0;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
};

struct Split {
  std::vector<McqItem> train;
  std::vector<McqItem> test;
};

enum class IdPolicy {
  // item_id is recomputed from content; `id` kept as source_id.
  kContentHash,
  // item_id is taken verbatim from `id` (derived files, e.g. translations,
  // carry the source item's id).
  kPreserve,
};

// Loads line-delimited JSON MCQ records: {id, question, choices[], answer,
// country?}. Errors name the line number and field. Duplicate ids throw.
std::vector<McqItem> LoadDataset(const std::filesystem::path& path,
                                 DatasetId dataset,
                                 IdPolicy policy = IdPolicy::kContentHash);

// Parses one record; exposed for reuse by derived-file readers.
McqItem ParseMcqRecord(std::string_view line, DatasetId dataset,
                       IdPolicy policy, std::size_t line_number);

std::string SerializeMcqRecord(const McqItem& item);
std::string SerializeDataset(const std::vector<McqItem>& items);

std::vector<ClaimRecord> LoadClaims(const std::filesystem::path& path);

struct ReformatResult {
  std::vector<McqItem> items;
  // True claims that could not be turned into a question because their
  // country has fewer than three false claims.
  std::size_t skipped_true_claims = 0;
  std::vector<std::string> skipped_countries;
};

// Turns true/false country claims into four-option questions holding one
// true claim and three false claims about the same country.
ReformatResult ReformatCultureAtlas(const std::vector<ClaimRecord>& claims,
                                    std::uint64_t seed);

inline constexpr std::string_view kCultureAtlasQuestionTemplate =
    "Which is the following is true about {country}?";

// Seeded Fisher-Yates over indices; first train_count go to train, the next
// test_count to test.
Split SplitItems(const std::vector<McqItem>& items, const SplitSpec& spec);

}  // namespace lsk
