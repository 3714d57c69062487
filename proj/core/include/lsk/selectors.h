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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/fraction.h"
#include "lsk/language.h"
#include "lsk/lsk.h"
#include "lsk/matrix.h"

namespace lsk {

enum class Strategy {
  kOnlyEnglish,
  kMajority,
  kGlobalLanguage,
  kLlmSelected,
  kCountry,
  kLskExtractor,
  kOracle,
};

// Report order.
const std::array<Strategy, 7>& AllStrategies();
std::string_view StrategyName(Strategy s);  // "only_english", "lsk_extractor", ...
Strategy ParseStrategy(std::string_view name);

// Country -> language lookup. Keys compare case-insensitively.
class CountryMap {
 public:
  explicit CountryMap(Language default_language = Language::kEn)
      : default_(default_language) {}

  // Throws Error(kInvalidArgument) if the folded name is already present.
  void Add(std::string_view country, Language lang);

  // Mapped language, or the default when the country is absent, unmapped, or
  // mapped to a language outside `available` (when given).
  Language Lookup(const std::optional<std::string>& country,
                  const std::vector<Language>* available = nullptr) const;

  Language default_language() const { return default_; }
  const std::vector<std::pair<std::string, Language>>& entries() const { return entries_; }

  // JSON object {country: code, ..., "_default": code}.
  static CountryMap FromJson(const nlohmann::json& j);
  static CountryMap Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;

  // Country tables for BLEnD and CultureAtlas; other datasets get an empty
  // map that always answers the default.
  static CountryMap BuiltIn(DatasetId dataset);

 private:
  Language default_;
  std::vector<std::pair<std::string, Language>> entries_;  // insertion order
  std::unordered_map<std::string, std::size_t> folded_;
};

std::string FoldCountryName(std::string_view name);

struct GlobalChoice {
  Language language = Language::kEn;
  // In the matrix's canonical column order.
  std::vector<std::pair<Language, Fraction>> train_accuracy;

  bool operator==(const GlobalChoice&) const = default;
};

// Column with the highest mean correctness; missing and invalid cells count as
// incorrect. Ties go to the canonical-first language. Throws on an empty
// matrix.
GlobalChoice TrainGlobalLanguage(const ResponseMatrix& train_matrix);

nlohmann::json ToJson(const GlobalChoice& g);
GlobalChoice GlobalChoiceFromJson(const nlohmann::json& j);

struct MajorityResult {
  std::optional<char> label;           // nullopt when no cell is ok
  std::vector<Language> contributing;  // voters for `label`, canonical order
};

// Plurality over ok cells. On a tie the label voted by the canonical-first
// language among the tied labels' voters wins.
MajorityResult SelectMajority(const ResponseMatrix& matrix, std::size_t item);

// Throws Error(kNotFound) when the matrix has no en column.
Language SelectOnlyEnglish(const ResponseMatrix& matrix);

// First correct language in canonical order, or nullopt.
std::optional<Language> SelectOracle(const ResponseMatrix& matrix, std::size_t item);

// item_id -> language chosen by the model.
using SelectionCache = std::map<std::string, Language>;

// Throws Error(kNotFound) for an uncached item.
Language SelectLlm(const std::string& item_id, const SelectionCache& cache);

nlohmann::json SelectionCacheToJson(const SelectionCache& cache);
SelectionCache SelectionCacheFromJson(const nlohmann::json& j);

struct ItemOutcome {
  std::string item_id;
  std::optional<Language> chosen;  // nullopt for majority and an all-wrong oracle row
  std::vector<Language> voters;    // majority only
  std::optional<char> label;
  bool correct = false;
  // Status of the cell that was read; nullopt when no single cell applies.
  std::optional<CellStatus> status;

  bool operator==(const ItemOutcome&) const = default;
};

struct SelectorOutcome {
  Strategy strategy = Strategy::kOracle;
  std::vector<ItemOutcome> per_item;

  std::size_t correct_count() const;
  // Throws Error(kInvalidArgument) when per_item is empty.
  Fraction accuracy() const;
};

// Trained state consulted by the strategies that need it. Pointers are
// borrowed; a null pointer makes the dependent strategy throw.
struct SelectorState {
  const GlobalChoice* global = nullptr;
  const ClusterModel* cluster_model = nullptr;
  const EmbeddingTable* embeddings = nullptr;
  const SelectionCache* llm_cache = nullptr;
  const CountryMap* country_map = nullptr;
  // item_id -> country, for items that carry one.
  const std::unordered_map<std::string, std::string>* item_country = nullptr;
};

// Applies `strategy` to each test item in order and scores it against the
// matrix. A chosen language without a matrix column scores as a missing cell.
SelectorOutcome Evaluate(Strategy strategy, const std::vector<std::string>& test_ids,
                         const ResponseMatrix& matrix, const SelectorState& state);

}  // namespace lsk
