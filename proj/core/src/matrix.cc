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

#include "lsk/matrix.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "lsk/error.h"

namespace lsk {

using nlohmann::json;

std::string_view CellStatusName(CellStatus status) {
  switch (status) {
    case CellStatus::kOk: return "ok";
    case CellStatus::kInvalidOutput: return "invalid_output";
    case CellStatus::kMissing: return "missing";
  }
  return "missing";
}

ResponseMatrix::ResponseMatrix(std::string dataset_id, std::string model_name,
                               std::vector<Language> languages,
                               std::vector<std::string> item_ids, std::vector<char> gold)
    : dataset_id_(std::move(dataset_id)),
      model_name_(std::move(model_name)),
      languages_(CanonicalSorted(std::move(languages))),
      items_(std::move(item_ids)),
      gold_(std::move(gold)) {
  if (gold_.size() != items_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "gold labels do not match item count");
  }
  if (std::adjacent_find(languages_.begin(), languages_.end()) != languages_.end()) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate language in matrix");
  }
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!item_index_.emplace(items_[i], i).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate item in matrix: " + items_[i]);
    }
  }
  cells_.assign(items_.size() * languages_.size(), AnswerCell{});
}

std::optional<std::size_t> ResponseMatrix::ItemIndex(const std::string& item_id) const {
  auto it = item_index_.find(item_id);
  if (it == item_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ResponseMatrix::LanguageIndex(Language lang) const {
  auto it = std::find(languages_.begin(), languages_.end(), lang);
  if (it == languages_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - languages_.begin());
}

const AnswerCell& ResponseMatrix::At(const std::string& item_id, Language lang) const {
  auto item = ItemIndex(item_id);
  if (!item) throw Error(ErrorKind::kNotFound, "item not in matrix: " + item_id);
  auto col = LanguageIndex(lang);
  if (!col) {
    throw Error(ErrorKind::kNotFound,
                "language not in matrix: " + std::string(Code(lang)));
  }
  return cell(*item, *col);
}

void ResponseMatrix::Set(std::size_t item, std::size_t lang, std::optional<char> label,
                         CellStatus status) {
  AnswerCell& c = cells_[item * languages_.size() + lang];
  if (status != CellStatus::kOk) label.reset();
  if (status == CellStatus::kOk && !label) {
    throw Error(ErrorKind::kInvalidArgument, "ok cell needs a label");
  }
  c.status = status;
  c.label = label;
  c.correct = status == CellStatus::kOk && *label == gold_[item];
}

ResponseMatrix ResponseMatrix::Rows(const std::vector<std::string>& item_ids) const {
  std::vector<char> gold;
  std::vector<std::size_t> source;
  for (const auto& id : item_ids) {
    auto idx = ItemIndex(id);
    if (!idx) throw Error(ErrorKind::kNotFound, "item not in matrix: " + id);
    source.push_back(*idx);
    gold.push_back(gold_[*idx]);
  }
  ResponseMatrix out(dataset_id_, model_name_, languages_, item_ids, std::move(gold));
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::copy_n(cells_.begin() + static_cast<std::ptrdiff_t>(source[i] * languages_.size()),
                languages_.size(),
                out.cells_.begin() + static_cast<std::ptrdiff_t>(i * languages_.size()));
  }
  return out;
}

bool ResponseMatrix::operator==(const ResponseMatrix& other) const {
  return dataset_id_ == other.dataset_id_ && model_name_ == other.model_name_ &&
         languages_ == other.languages_ && items_ == other.items_ &&
         gold_ == other.gold_ && cells_ == other.cells_;
}

MatrixBuild BuildMatrix(const std::vector<InferenceRecord>& records,
                        const std::vector<McqItem>& dataset,
                        const std::string& model_name,
                        const std::vector<Language>& languages) {
  std::vector<std::string> ids;
  std::vector<char> gold;
  ids.reserve(dataset.size());
  for (const auto& item : dataset) {
    ids.push_back(item.item_id);
    gold.push_back(item.gold_label);
  }
  std::string dataset_id =
      dataset.empty() ? std::string("custom") : std::string(DatasetName(dataset[0].dataset_id));
  MatrixBuild build{ResponseMatrix(dataset_id, model_name, languages, ids, gold), {}};
  ResponseMatrix& m = build.matrix;

  std::set<std::string> unknown;
  for (const auto& rec : records) {
    if (rec.model_name != model_name) continue;
    auto item = m.ItemIndex(rec.item_id);
    if (!item) {
      unknown.insert(rec.item_id);
      continue;
    }
    auto col = m.LanguageIndex(rec.language);
    if (!col) continue;
    const AnswerCell& current = m.cell(*item, *col);
    if (current.status == CellStatus::kOk) continue;  // first ok wins
    switch (rec.status) {
      case RecordStatus::kOk:
        m.Set(*item, *col, rec.extracted_label, CellStatus::kOk);
        break;
      case RecordStatus::kInvalidOutput:
        m.Set(*item, *col, std::nullopt, CellStatus::kInvalidOutput);
        break;
      case RecordStatus::kTransportError:
        break;
    }
  }
  build.warnings.assign(unknown.begin(), unknown.end());
  return build;
}

std::vector<std::pair<std::string, Language>> MissingCells(const ResponseMatrix& matrix) {
  std::vector<std::pair<std::string, Language>> out;
  for (std::size_t i = 0; i < matrix.item_count(); ++i) {
    for (std::size_t l = 0; l < matrix.language_count(); ++l) {
      if (matrix.cell(i, l).status == CellStatus::kMissing) {
        out.emplace_back(matrix.items()[i], matrix.languages()[l]);
      }
    }
  }
  return out;
}

CellCounts CountCells(const ResponseMatrix& matrix) {
  CellCounts counts;
  for (std::size_t i = 0; i < matrix.item_count(); ++i) {
    for (std::size_t l = 0; l < matrix.language_count(); ++l) {
      switch (matrix.cell(i, l).status) {
        case CellStatus::kOk: ++counts.ok; break;
        case CellStatus::kInvalidOutput: ++counts.invalid; break;
        case CellStatus::kMissing: ++counts.missing; break;
      }
    }
  }
  return counts;
}

json ToJson(const ResponseMatrix& matrix) {
  json langs = json::array();
  for (Language lang : matrix.languages()) langs.push_back(std::string(Code(lang)));
  json rows = json::array();
  for (std::size_t i = 0; i < matrix.item_count(); ++i) {
    json labels = json::array();
    json statuses = json::array();
    for (std::size_t l = 0; l < matrix.language_count(); ++l) {
      const AnswerCell& c = matrix.cell(i, l);
      labels.push_back(c.label ? json(std::string(1, *c.label)) : json(nullptr));
      statuses.push_back(std::string(CellStatusName(c.status)));
    }
    rows.push_back({{"id", matrix.items()[i]},
                    {"gold", std::string(1, matrix.gold(i))},
                    {"labels", std::move(labels)},
                    {"status", std::move(statuses)}});
  }
  return {{"dataset_id", matrix.dataset_id()},
          {"model", matrix.model_name()},
          {"languages", std::move(langs)},
          {"items", std::move(rows)}};
}

ResponseMatrix ResponseMatrixFromJson(const json& j) {
  try {
    std::vector<Language> langs;
    for (const auto& code : j.at("languages")) langs.push_back(ParseLanguage(code.get<std::string>()));
    std::vector<std::string> ids;
    std::vector<char> gold;
    for (const auto& row : j.at("items")) {
      ids.push_back(row.at("id").get<std::string>());
      gold.push_back(row.at("gold").get<std::string>().at(0));
    }
    ResponseMatrix m(j.at("dataset_id").get<std::string>(), j.at("model").get<std::string>(),
                     langs, ids, gold);
    // Columns in the file follow the file's language order.
    std::vector<std::size_t> column;
    for (Language lang : langs) column.push_back(*m.LanguageIndex(lang));
    std::size_t i = 0;
    for (const auto& row : j.at("items")) {
      const auto& labels = row.at("labels");
      const auto& statuses = row.at("status");
      for (std::size_t l = 0; l < langs.size(); ++l) {
        const std::string s = statuses.at(l).get<std::string>();
        CellStatus status = s == "ok" ? CellStatus::kOk
                            : s == "invalid_output" ? CellStatus::kInvalidOutput
                                                    : CellStatus::kMissing;
        std::optional<char> label;
        if (!labels.at(l).is_null()) label = labels.at(l).get<std::string>().at(0);
        m.Set(i, column[l], label, status);
      }
      ++i;
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("response matrix: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorKind::kParse, std::string("response matrix: ") + e.what());
  }
}

}  // namespace lsk
