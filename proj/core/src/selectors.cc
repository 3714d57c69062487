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

#include "lsk/selectors.h"

#include <algorithm>

#include "lsk/error.h"
#include "lsk/io.h"
#include "utf8.h"

namespace lsk {
namespace {

using nlohmann::json;

struct CountryRow {
  Language language;
  std::vector<const char*> countries;
};

const std::vector<CountryRow>& BlendRows() {
  static const auto* rows = new std::vector<CountryRow>{
    {Language::kAr, {"Algeria", "Ethiopia"}},
    {Language::kZh, {"China"}},
    {Language::kEn, {"Assam", "Azerbaijan", "Greece", "Indonesia", "Iran", "Northern Nigeria", "UK", "US", "West Java"}},
    {Language::kKo, {"North Korea", "South Korea"}},
    {Language::kEs, {"Mexico", "Spain"}},
  };
  return *rows;
}

const std::vector<CountryRow>& CultureAtlasRows() {
  static const auto* rows = new std::vector<CountryRow>{
    {Language::kAr, {"Algeria", "Bahrain", "Comoros", "Egypt", "Iraq", "Jordan", "Kuwait", "Lebanon", "Libya", "Mauritania", "Morocco", "Oman", "Qatar", "Saudi Arabia", "Sudan", "Tunisia", "United Arab Emirates", "Yemen"}},
    {Language::kBn, {"Bangladesh"}},
    {Language::kZh, {"China"}},
    {Language::kEn, {"Afghanistan", "Albania", "Andorra", "Antigua and Barbuda", "Armenia", "Australia", "Azerbaijan", "Bahamas", "Barbados", "Belarus", "Belgium", "Belize", "Bhutan", "Bosnia and Herzegovina", "Botswana", "Bulgaria", "Burundi", "Cambodia", "Canada", "Croatia", "Cyprus", "Czechia", "Denmark", "Dominica", "Eritrea", "Estonia", "Eswatini", "Ethiopia", "Federated States of Micronesia", "Fiji", "Finland", "Gambia", "Georgia", "Ghana", "Greece", "Grenada", "Guyana", "Haiti", "Hungary", "Iceland", "Indonesia", "Ireland", "Islamic Republic of Iran", "Israel", "Jamaica", "Kazakhstan", "Kenya", "Kiribati", "Kyrgyzstan", "Lao People's Democratic Republic", "Latvia", "Lesotho", "Liberia", "Lithuania", "Luxembourg", "Madagascar", "Malawi", "Malaysia", "Maldives", "Malta", "Marshall Islands", "Mauritius", "Mongolia", "Montenegro", "Myanmar", "Namibia", "Nauru", "Nepal", "Netherlands", "New Zealand", "Nigeria", "North Macedonia", "Norway", "Pakistan", "Palau", "Papua New Guinea", "Philippines", "Poland", "Republic of Moldova", "Romania", "Rwanda", "Saint Kitts and Nevis", "Saint Lucia", "Saint Vincent and the Grenadines", "Samoa", "Serbia", "Seychelles", "Sierra Leone", "Singapore", "Slovakia", "Slovenia", "Solomon Islands", "Somalia", "South Africa", "South Sudan", "Sri Lanka", "Suriname", "Sweden", "Tajikistan", "Timor-Leste", "Tonga", "Trinidad and Tobago", "Turkmenistan", "Tuvalu", "Uganda", "Ukraine", "United Kingdom of Great Britain and Northern Ireland", "United Republic of Tanzania", "United States of America", "Uzbekistan", "Vanuatu", "Zambia", "Zimbabwe"}},
    {Language::kFr, {"Benin", "Burkina Faso", "Cameroon", "Central African Republic", "Chad", "Congo", "Côte d'Ivoire", "Democratic Republic of the Congo", "Djibouti", "France", "Gabon", "Guinea", "Monaco", "Niger", "Senegal", "Togo"}},
    {Language::kDe, {"Austria", "Germany", "Liechtenstein", "Switzerland"}},
    {Language::kHi, {"India"}},
    {Language::kIt, {"Italy", "San Marino"}},
    {Language::kJa, {"Japan"}},
    {Language::kKo, {"Democratic People's Republic of Korea", "Republic of Korea"}},
    {Language::kPt, {"Angola", "Brazil", "Guinea-Bissau", "Mozambique", "Portugal", "São Tomé and Príncipe"}},
    {Language::kRu, {"Russian Federation"}},
    {Language::kEs, {"Argentina", "Bolivarian Republic of Venezuela", "Chile", "Colombia", "Costa Rica", "Cuba", "Dominican Republic", "Ecuador", "El Salvador", "Equatorial Guinea", "Guatemala", "Honduras", "Mexico", "Nicaragua", "Panama", "Paraguay", "Peru", "Plurinational State of Bolivia", "Spain", "Uruguay"}},
    {Language::kTh, {"Thailand"}},
    {Language::kTr, {"Türkiye"}},
    {Language::kVi, {"Viet Nam"}},
  };
  return *rows;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

ItemOutcome ReadCell(const std::string& id, std::size_t row, Language lang,
                     const ResponseMatrix& matrix) {
  ItemOutcome out;
  out.item_id = id;
  out.chosen = lang;
  const auto col = matrix.LanguageIndex(lang);
  if (!col) {
    out.status = CellStatus::kMissing;
    return out;
  }
  const AnswerCell& cell = matrix.cell(row, *col);
  out.label = cell.label;
  out.correct = cell.correct;
  out.status = cell.status;
  return out;
}

template <typename T>
const T& Require(const T* p, Strategy s, const char* what) {
  if (p == nullptr) {
    throw Error(ErrorKind::kNotFound,
                std::string(StrategyName(s)) + " needs " + what + "; none was supplied");
  }
  return *p;
}

}  // namespace

const std::array<Strategy, 7>& AllStrategies() {
  static constexpr std::array<Strategy, 7> kAll = {
      Strategy::kOnlyEnglish, Strategy::kMajority,      Strategy::kGlobalLanguage,
      Strategy::kLlmSelected, Strategy::kCountry,       Strategy::kLskExtractor,
      Strategy::kOracle};
  return kAll;
}

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kOnlyEnglish:
      return "only_english";
    case Strategy::kMajority:
      return "majority";
    case Strategy::kGlobalLanguage:
      return "global_language";
    case Strategy::kLlmSelected:
      return "llm_selected";
    case Strategy::kCountry:
      return "country";
    case Strategy::kLskExtractor:
      return "lsk_extractor";
    case Strategy::kOracle:
      return "oracle";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : AllStrategies()) {
    if (StrategyName(s) == name) return s;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

std::string FoldCountryName(std::string_view name) {
  name = Trim(name);
  std::string out;
  std::size_t pos = 0;
  while (pos < name.size()) utf8::Append(out, utf8::FoldCase(utf8::DecodeNext(name, pos)));
  return out;
}

void CountryMap::Add(std::string_view country, Language lang) {
  std::string folded = FoldCountryName(country);
  if (folded.empty()) throw Error(ErrorKind::kInvalidArgument, "empty country name");
  if (folded_.count(folded)) {
    throw Error(ErrorKind::kInvalidArgument,
                "duplicate country '" + std::string(country) + "' in country map");
  }
  folded_.emplace(std::move(folded), entries_.size());
  entries_.emplace_back(std::string(Trim(country)), lang);
}

Language CountryMap::Lookup(const std::optional<std::string>& country,
                            const std::vector<Language>* available) const {
  if (!country) return default_;
  auto it = folded_.find(FoldCountryName(*country));
  if (it == folded_.end()) return default_;
  const Language lang = entries_[it->second].second;
  if (available != nullptr &&
      std::find(available->begin(), available->end(), lang) == available->end()) {
    return default_;
  }
  return lang;
}

CountryMap CountryMap::FromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "country map must be a JSON object");
  Language def = Language::kEn;
  if (auto it = j.find("_default"); it != j.end()) {
    if (!it->is_string()) throw Error(ErrorKind::kParse, "country map: _default must be a string");
    def = ParseLanguage(it->get<std::string>());
  }
  CountryMap map(def);
  for (const auto& [country, code] : j.items()) {
    if (country == "_default") continue;
    if (!code.is_string()) {
      throw Error(ErrorKind::kParse, "country map: value for '" + country + "' must be a string");
    }
    map.Add(country, ParseLanguage(code.get<std::string>()));
  }
  return map;
}

CountryMap CountryMap::Load(const std::filesystem::path& path) {
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kParse, "malformed country map " + path.string());
  return FromJson(j);
}

json CountryMap::ToJson() const {
  json j = json::object();
  for (const auto& [country, lang] : entries_) j[country] = std::string(Code(lang));
  j["_default"] = std::string(Code(default_));
  return j;
}

CountryMap CountryMap::BuiltIn(DatasetId dataset) {
  CountryMap map;
  const std::vector<CountryRow>* rows = nullptr;
  if (dataset == DatasetId::kBlend) rows = &BlendRows();
  if (dataset == DatasetId::kCultureAtlas) rows = &CultureAtlasRows();
  if (rows == nullptr) return map;
  for (const auto& row : *rows) {
    for (const char* c : row.countries) map.Add(c, row.language);
  }
  return map;
}

GlobalChoice TrainGlobalLanguage(const ResponseMatrix& train_matrix) {
  if (train_matrix.item_count() == 0 || train_matrix.language_count() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "global language needs a non-empty training split");
  }
  GlobalChoice g;
  std::size_t best_count = 0;
  bool first = true;
  for (std::size_t l = 0; l < train_matrix.language_count(); ++l) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < train_matrix.item_count(); ++i) {
      if (train_matrix.cell(i, l).correct) ++correct;
    }
    const Language lang = train_matrix.languages()[l];
    g.train_accuracy.emplace_back(lang, Fraction::Of(correct, train_matrix.item_count()));
    // Columns are canonical, so a strict '>' keeps the earliest on ties.
    if (first || correct > best_count) {
      best_count = correct;
      g.language = lang;
      first = false;
    }
  }
  return g;
}

json ToJson(const GlobalChoice& g) {
  json acc = json::array();
  for (const auto& [lang, f] : g.train_accuracy) {
    acc.push_back({{"language", std::string(Code(lang))}, {"num", f.num}, {"den", f.den}});
  }
  return {{"language", std::string(Code(g.language))}, {"train_accuracy", std::move(acc)}};
}

GlobalChoice GlobalChoiceFromJson(const json& j) {
  GlobalChoice g;
  try {
    g.language = ParseLanguage(j.at("language").get<std::string>());
    for (const auto& e : j.at("train_accuracy")) {
      g.train_accuracy.emplace_back(ParseLanguage(e.at("language").get<std::string>()),
                                    Fraction{e.at("num").get<std::uint64_t>(),
                                             e.at("den").get<std::uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("global choice: ") + e.what());
  }
  return g;
}

MajorityResult SelectMajority(const ResponseMatrix& matrix, std::size_t item) {
  // Per label: vote count and the canonical-first voter.
  std::array<std::size_t, 256> votes{};
  std::array<std::size_t, 256> first_voter;
  first_voter.fill(matrix.language_count());
  for (std::size_t l = 0; l < matrix.language_count(); ++l) {
    const AnswerCell& cell = matrix.cell(item, l);
    if (cell.status != CellStatus::kOk || !cell.label) continue;
    const auto c = static_cast<unsigned char>(*cell.label);
    ++votes[c];
    if (first_voter[c] > l) first_voter[c] = l;
  }
  std::size_t top = 0;
  for (std::size_t v : votes) top = std::max(top, v);
  MajorityResult result;
  if (top == 0) return result;
  std::size_t winner_voter = matrix.language_count();
  unsigned char winner = 0;
  for (std::size_t c = 0; c < votes.size(); ++c) {
    if (votes[c] == top && first_voter[c] < winner_voter) {
      winner_voter = first_voter[c];
      winner = static_cast<unsigned char>(c);
    }
  }
  result.label = static_cast<char>(winner);
  for (std::size_t l = 0; l < matrix.language_count(); ++l) {
    const AnswerCell& cell = matrix.cell(item, l);
    if (cell.status == CellStatus::kOk && cell.label == result.label) {
      result.contributing.push_back(matrix.languages()[l]);
    }
  }
  return result;
}

Language SelectOnlyEnglish(const ResponseMatrix& matrix) {
  if (!matrix.HasLanguage(Language::kEn)) {
    throw Error(ErrorKind::kNotFound, "only_english needs an en column in the response matrix");
  }
  return Language::kEn;
}

std::optional<Language> SelectOracle(const ResponseMatrix& matrix, std::size_t item) {
  for (std::size_t l = 0; l < matrix.language_count(); ++l) {
    if (matrix.cell(item, l).correct) return matrix.languages()[l];
  }
  return std::nullopt;
}

Language SelectLlm(const std::string& item_id, const SelectionCache& cache) {
  auto it = cache.find(item_id);
  if (it == cache.end()) {
    throw Error(ErrorKind::kNotFound, "no LLM language selection cached for item " + item_id +
                                          "; run the select-llm stage first");
  }
  return it->second;
}

json SelectionCacheToJson(const SelectionCache& cache) {
  json j = json::object();
  for (const auto& [id, lang] : cache) j[id] = std::string(Code(lang));
  return j;
}

SelectionCache SelectionCacheFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "selection cache must be a JSON object");
  SelectionCache cache;
  for (const auto& [id, code] : j.items()) {
    if (!code.is_string()) throw Error(ErrorKind::kParse, "selection cache: bad entry for " + id);
    cache[id] = ParseLanguage(code.get<std::string>());
  }
  return cache;
}

std::size_t SelectorOutcome::correct_count() const {
  std::size_t n = 0;
  for (const auto& o : per_item) n += o.correct ? 1 : 0;
  return n;
}

Fraction SelectorOutcome::accuracy() const {
  if (per_item.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(StrategyName(strategy)) + " outcome has no items");
  }
  return Fraction::Of(correct_count(), per_item.size());
}

SelectorOutcome Evaluate(Strategy strategy, const std::vector<std::string>& test_ids,
                         const ResponseMatrix& matrix, const SelectorState& state) {
  SelectorOutcome outcome;
  outcome.strategy = strategy;
  outcome.per_item.reserve(test_ids.size());
  if (strategy == Strategy::kOnlyEnglish) SelectOnlyEnglish(matrix);

  for (const auto& id : test_ids) {
    const auto row = matrix.ItemIndex(id);
    if (!row) throw Error(ErrorKind::kNotFound, "test item " + id + " is not in the matrix");
    switch (strategy) {
      case Strategy::kOnlyEnglish:
        outcome.per_item.push_back(ReadCell(id, *row, Language::kEn, matrix));
        break;
      case Strategy::kGlobalLanguage: {
        const auto& g = Require(state.global, strategy, "a trained global language");
        outcome.per_item.push_back(ReadCell(id, *row, g.language, matrix));
        break;
      }
      case Strategy::kLlmSelected: {
        const auto& cache = Require(state.llm_cache, strategy, "an LLM selection cache");
        outcome.per_item.push_back(ReadCell(id, *row, SelectLlm(id, cache), matrix));
        break;
      }
      case Strategy::kCountry: {
        const auto& map = Require(state.country_map, strategy, "a country map");
        std::optional<std::string> country;
        if (state.item_country != nullptr) {
          if (auto it = state.item_country->find(id); it != state.item_country->end()) {
            country = it->second;
          }
        }
        const Language lang = map.Lookup(country, &matrix.languages());
        outcome.per_item.push_back(ReadCell(id, *row, lang, matrix));
        break;
      }
      case Strategy::kLskExtractor: {
        const auto& model = Require(state.cluster_model, strategy, "a trained cluster model");
        const auto& table = Require(state.embeddings, strategy, "item embeddings");
        auto it = table.find(id);
        if (it == table.end()) {
          throw Error(ErrorKind::kNotFound, "no embedding for test item " + id +
                                                "; run the embed stage first");
        }
        outcome.per_item.push_back(ReadCell(id, *row, LskSelect(it->second, model), matrix));
        break;
      }
      case Strategy::kMajority: {
        MajorityResult m = SelectMajority(matrix, *row);
        ItemOutcome o;
        o.item_id = id;
        o.label = m.label;
        o.voters = std::move(m.contributing);
        o.correct = m.label.has_value() && *m.label == matrix.gold(*row);
        outcome.per_item.push_back(std::move(o));
        break;
      }
      case Strategy::kOracle: {
        const auto lang = SelectOracle(matrix, *row);
        if (lang) {
          outcome.per_item.push_back(ReadCell(id, *row, *lang, matrix));
        } else {
          ItemOutcome o;
          o.item_id = id;
          outcome.per_item.push_back(std::move(o));
        }
        break;
      }
    }
  }
  return outcome;
}

}  // namespace lsk
