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
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/language.h"
#include "lsk/store.h"

namespace lsk {

enum class CellStatus { kOk, kInvalidOutput, kMissing };

std::string_view CellStatusName(CellStatus status);

// Extracted answer for one (item, language) pair. A missing cell has no label
// and is never correct; a correct cell's label equals the gold label.
struct AnswerCell {
  std::optional<char> label;
  bool correct = false;
  CellStatus status = CellStatus::kMissing;

  bool operator==(const AnswerCell&) const = default;
};

// Total (item x language) table of answers. Languages are kept in canonical
// order; every cell exists, with kMissing marking pairs that were never run.
class ResponseMatrix {
 public:
  ResponseMatrix() = default;
  ResponseMatrix(std::string dataset_id, std::string model_name,
                 std::vector<Language> languages, std::vector<std::string> item_ids,
                 std::vector<char> gold);

  const std::string& dataset_id() const { return dataset_id_; }
  const std::string& model_name() const { return model_name_; }
  const std::vector<Language>& languages() const { return languages_; }
  const std::vector<std::string>& items() const { return items_; }
  std::size_t item_count() const { return items_.size(); }
  std::size_t language_count() const { return languages_.size(); }
  char gold(std::size_t item) const { return gold_[item]; }

  std::optional<std::size_t> ItemIndex(const std::string& item_id) const;
  std::optional<std::size_t> LanguageIndex(Language lang) const;
  bool HasLanguage(Language lang) const { return LanguageIndex(lang).has_value(); }

  const AnswerCell& cell(std::size_t item, std::size_t lang) const {
    return cells_[item * languages_.size() + lang];
  }
  // Throws Error(kNotFound) for an unknown item or language.
  const AnswerCell& At(const std::string& item_id, Language lang) const;

  // Stores an answer; correctness is derived from the gold label.
  void Set(std::size_t item, std::size_t lang, std::optional<char> label,
           CellStatus status);

  // Rows for `item_ids`, in that order. Throws on unknown ids.
  ResponseMatrix Rows(const std::vector<std::string>& item_ids) const;

  bool operator==(const ResponseMatrix& other) const;

 private:
  std::string dataset_id_;
  std::string model_name_;
  std::vector<Language> languages_;
  std::vector<std::string> items_;
  std::vector<char> gold_;
  std::vector<AnswerCell> cells_;
  std::unordered_map<std::string, std::size_t> item_index_;
};

struct MatrixBuild {
  ResponseMatrix matrix;
  // Item ids present in the store for this model but absent from the dataset.
  std::vector<std::string> warnings;
};

// For each (item, language): the first-written ok record gives the answer;
// otherwise an invalid_output record marks the cell invalid; otherwise the
// cell is missing. transport_error records are ignored. Only records whose
// model_name matches are used.
MatrixBuild BuildMatrix(const std::vector<InferenceRecord>& records,
                        const std::vector<McqItem>& dataset,
                        const std::string& model_name,
                        const std::vector<Language>& languages);

// Cells with status kMissing, in item order then canonical language order.
std::vector<std::pair<std::string, Language>> MissingCells(const ResponseMatrix& matrix);

struct CellCounts {
  std::size_t ok = 0;
  std::size_t invalid = 0;
  std::size_t missing = 0;
};
CellCounts CountCells(const ResponseMatrix& matrix);

nlohmann::json ToJson(const ResponseMatrix& matrix);
ResponseMatrix ResponseMatrixFromJson(const nlohmann::json& j);

}  // namespace lsk
