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

#include "lsk/dataset.h"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_set>

#include "lsk/error.h"
#include "lsk/io.h"
#include "lsk/rng.h"

namespace lsk {
namespace {

using nlohmann::json;

[[noreturn]] void FailRecord(std::size_t line, std::string_view field,
                             std::string_view what) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": field '" +
                                     std::string(field) + "': " +
                                     std::string(what));
}

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

}  // namespace

std::string_view DatasetName(DatasetId id) {
  switch (id) {
    case DatasetId::kBlend: return "blend";
    case DatasetId::kCultureAtlas: return "culture_atlas";
    case DatasetId::kSocialIqa: return "social_iqa";
    case DatasetId::kCustom: return "custom";
  }
  return "custom";
}

DatasetId ParseDatasetId(std::string_view name) {
  for (DatasetId id : {DatasetId::kBlend, DatasetId::kCultureAtlas,
                       DatasetId::kSocialIqa, DatasetId::kCustom}) {
    if (DatasetName(id) == name) return id;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown dataset id '" + std::string(name) + "'");
}

bool McqItem::HasLabel(char label) const {
  return std::any_of(choices.begin(), choices.end(),
                     [label](const Choice& c) { return c.label == label; });
}

void Validate(const McqItem& item) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidArgument, what);
  };
  if (IsBlank(item.question)) fail("question is empty");
  if (item.choices.size() < 2 || item.choices.size() > 26) {
    fail("expected 2-26 choices, got " + std::to_string(item.choices.size()));
  }
  for (std::size_t i = 0; i < item.choices.size(); ++i) {
    const char expected = static_cast<char>('A' + i);
    if (item.choices[i].label != expected) {
      fail(std::string("choice labels must run consecutively from A; found '") +
           item.choices[i].label + "' at position " + std::to_string(i));
    }
    if (IsBlank(item.choices[i].text)) {
      fail(std::string("choice ") + expected + " text is empty");
    }
  }
  if (!item.HasLabel(item.gold_label)) fail("gold label not among choices");
}

std::string ContentItemId(DatasetId dataset, std::string_view question,
                          const std::vector<Choice>& choices, char gold) {
  // Unit separators keep field boundaries unambiguous.
  std::string material(question);
  for (const auto& c : choices) {
    material += '\x1f';
    material += c.text;
  }
  material += '\x1e';
  material += gold;
  return std::string(DatasetName(dataset)) + "/" +
         Sha256Hex(material).substr(0, 16);
}

McqItem MakeItem(DatasetId dataset, std::string question,
                 std::vector<std::string> choice_texts, char gold,
                 std::optional<std::string> country) {
  McqItem item;
  item.dataset_id = dataset;
  item.question = std::move(question);
  for (std::size_t i = 0; i < choice_texts.size(); ++i) {
    item.choices.push_back({static_cast<char>('A' + i), std::move(choice_texts[i])});
  }
  item.gold_label = gold;
  item.country = std::move(country);
  Validate(item);
  item.item_id = ContentItemId(dataset, item.question, item.choices, gold);
  return item;
}

McqItem ParseMcqRecord(std::string_view line, DatasetId dataset,
                       IdPolicy policy, std::size_t line_number) {
  json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded() || !record.is_object()) {
    FailRecord(line_number, "<record>", "not a JSON object");
  }
  McqItem item;
  item.dataset_id = dataset;

  auto q = record.find("question");
  if (q == record.end() || !q->is_string()) {
    FailRecord(line_number, "question", "missing or not a string");
  }
  item.question = q->get<std::string>();

  auto choices = record.find("choices");
  if (choices == record.end() || !choices->is_array()) {
    FailRecord(line_number, "choices", "missing or not an array");
  }
  for (std::size_t i = 0; i < choices->size(); ++i) {
    const auto& c = (*choices)[i];
    if (!c.is_string()) FailRecord(line_number, "choices", "entry is not a string");
    if (i >= 26) FailRecord(line_number, "choices", "more than 26 choices");
    item.choices.push_back({static_cast<char>('A' + i), c.get<std::string>()});
  }

  auto answer = record.find("answer");
  if (answer == record.end() || !answer->is_string() ||
      answer->get<std::string>().size() != 1) {
    FailRecord(line_number, "answer", "missing or not a single letter");
  }
  item.gold_label = answer->get<std::string>()[0];

  if (auto country = record.find("country");
      country != record.end() && !country->is_null()) {
    if (!country->is_string()) FailRecord(line_number, "country", "not a string");
    if (!country->get<std::string>().empty()) {
      item.country = country->get<std::string>();
    }
  }
  if (auto lang = record.find("language"); lang != record.end()) {
    if (!lang->is_string()) FailRecord(line_number, "language", "not a string");
    auto parsed = TryParseLanguage(lang->get<std::string>());
    if (!parsed) FailRecord(line_number, "language", "unknown language code");
    item.source_language = *parsed;
  }

  try {
    Validate(item);
  } catch (const Error& e) {
    std::string what = e.what();
    std::string field = "choices";
    if (what.find("gold") != std::string::npos) field = "answer";
    if (what.find("question") != std::string::npos) field = "question";
    FailRecord(line_number, field, what);
  }

  std::optional<std::string> given_id;
  if (auto id = record.find("id"); id != record.end() && !id->is_null()) {
    given_id = id->is_string() ? id->get<std::string>() : id->dump();
  }
  if (policy == IdPolicy::kPreserve) {
    if (!given_id || given_id->empty()) {
      FailRecord(line_number, "id", "required for derived files");
    }
    item.item_id = *given_id;
  } else {
    item.item_id =
        ContentItemId(dataset, item.question, item.choices, item.gold_label);
    if (given_id && *given_id != item.item_id) item.source_id = given_id;
  }
  if (auto source = record.find("source_id");
      source != record.end() && source->is_string()) {
    item.source_id = source->get<std::string>();
  }
  return item;
}

std::vector<McqItem> LoadDataset(const std::filesystem::path& path,
                                 DatasetId dataset, IdPolicy policy) {
  std::vector<McqItem> items;
  std::unordered_set<std::string> seen;
  ForEachLine(path, [&](std::size_t number, std::string_view line) {
    McqItem item = ParseMcqRecord(line, dataset, policy, number);
    if (!seen.insert(item.item_id).second) {
      FailRecord(number, "id", "duplicate item_id " + item.item_id);
    }
    items.push_back(std::move(item));
  });
  return items;
}

std::string SerializeMcqRecord(const McqItem& item) {
  json record = json::object();
  record["id"] = item.item_id;
  record["question"] = item.question;
  json choices = json::array();
  for (const auto& c : item.choices) choices.push_back(c.text);
  record["choices"] = std::move(choices);
  record["answer"] = std::string(1, item.gold_label);
  if (item.country) record["country"] = *item.country;
  if (item.source_language != Language::kEn) {
    record["language"] = std::string(Code(item.source_language));
  }
  if (item.source_id) record["source_id"] = *item.source_id;
  return record.dump();
}

std::string SerializeDataset(const std::vector<McqItem>& items) {
  std::string out;
  for (const auto& item : items) {
    out += SerializeMcqRecord(item);
    out += '\n';
  }
  return out;
}

std::vector<ClaimRecord> LoadClaims(const std::filesystem::path& path) {
  std::vector<ClaimRecord> claims;
  ForEachLine(path, [&](std::size_t number, std::string_view line) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      FailRecord(number, "<record>", "not a JSON object");
    }
    ClaimRecord claim;
    auto country = record.find("country");
    if (country == record.end() || !country->is_string() ||
        IsBlank(country->get<std::string>())) {
      FailRecord(number, "country", "missing or empty");
    }
    claim.country = country->get<std::string>();
    auto text = record.find("claim");
    if (text == record.end() || !text->is_string() ||
        IsBlank(text->get<std::string>())) {
      FailRecord(number, "claim", "missing or empty");
    }
    claim.claim = text->get<std::string>();
    auto label = record.find("label");
    if (label == record.end()) FailRecord(number, "label", "missing");
    if (label->is_boolean()) {
      claim.truth = label->get<bool>();
    } else if (label->is_string() &&
               (label->get<std::string>() == "true" ||
                label->get<std::string>() == "false")) {
      claim.truth = label->get<std::string>() == "true";
    } else if (label->is_number_integer() &&
               (label->get<int>() == 0 || label->get<int>() == 1)) {
      claim.truth = label->get<int>() == 1;
    } else {
      FailRecord(number, "label", "expected true/false");
    }
    claims.push_back(std::move(claim));
  });
  return claims;
}

ReformatResult ReformatCultureAtlas(const std::vector<ClaimRecord>& claims,
                                    std::uint64_t seed) {
  struct Pool {
    std::vector<const ClaimRecord*> trues;
    std::vector<const ClaimRecord*> falses;
  };
  // Countries are processed in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, Pool> pools;
  for (const auto& claim : claims) {
    if (IsBlank(claim.country) || IsBlank(claim.claim)) {
      throw Error(ErrorKind::kInvalidArgument, "claim with empty country or text");
    }
    auto [it, inserted] = pools.try_emplace(claim.country);
    if (inserted) order.push_back(claim.country);
    (claim.truth ? it->second.trues : it->second.falses).push_back(&claim);
  }

  Rng rng(seed);
  ReformatResult result;
  std::unordered_set<std::string> emitted;
  for (const auto& country : order) {
    Pool& pool = pools[country];
    if (pool.trues.empty()) continue;
    if (pool.falses.size() < 3) {
      result.skipped_true_claims += pool.trues.size();
      result.skipped_countries.push_back(country);
      continue;
    }
    const bool enough_for_disjoint = pool.falses.size() >= 3 * pool.trues.size();
    std::vector<std::size_t> false_order(pool.falses.size());
    for (std::size_t i = 0; i < false_order.size(); ++i) false_order[i] = i;
    if (enough_for_disjoint) rng.Shuffle(std::span<std::size_t>(false_order));

    for (std::size_t t = 0; t < pool.trues.size(); ++t) {
      std::vector<const ClaimRecord*> options{pool.trues[t]};
      if (enough_for_disjoint) {
        for (std::size_t j = 0; j < 3; ++j) {
          options.push_back(pool.falses[false_order[3 * t + j]]);
        }
      } else {
        // Partial Fisher-Yates: three distinct draws from the whole pool.
        for (std::size_t j = 0; j < 3; ++j) {
          std::size_t pick = j + rng.UniformIndex(false_order.size() - j);
          std::swap(false_order[j], false_order[pick]);
          options.push_back(pool.falses[false_order[j]]);
        }
      }
      rng.Shuffle(std::span<const ClaimRecord*>(options));

      std::vector<std::string> texts;
      char gold = 'A';
      for (std::size_t j = 0; j < options.size(); ++j) {
        texts.push_back(options[j]->claim);
        if (options[j] == pool.trues[t]) gold = static_cast<char>('A' + j);
      }
      std::string question = ReplaceAll(
          std::string(kCultureAtlasQuestionTemplate), "{country}", country);
      McqItem item = MakeItem(DatasetId::kCultureAtlas, std::move(question),
                              std::move(texts), gold, country);
      // Identical input claims can reproduce an identical question.
      if (!emitted.insert(item.item_id).second) continue;
      result.items.push_back(std::move(item));
    }
  }
  return result;
}

Split SplitItems(const std::vector<McqItem>& items, const SplitSpec& spec) {
  if (spec.train_count > items.size() ||
      spec.test_count > items.size() - spec.train_count) {
    throw Error(ErrorKind::kInvalidArgument,
                "split of " + std::to_string(spec.train_count) + "+" +
                    std::to_string(spec.test_count) + " exceeds dataset size " +
                    std::to_string(items.size()));
  }
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.Shuffle(std::span<std::size_t>(order));
  Split split;
  split.train.reserve(spec.train_count);
  split.test.reserve(spec.test_count);
  for (std::size_t i = 0; i < spec.train_count; ++i) {
    split.train.push_back(items[order[i]]);
  }
  for (std::size_t i = 0; i < spec.test_count; ++i) {
    split.test.push_back(items[order[spec.train_count + i]]);
  }
  return split;
}

}  // namespace lsk
