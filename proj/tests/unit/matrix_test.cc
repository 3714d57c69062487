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

#include <gtest/gtest.h>

#include "lsk/error.h"
#include "lsk/rng.h"
#include "lsk/store.h"

namespace lsk {
namespace {

std::vector<McqItem> Items() {
  return {MakeItem(DatasetId::kBlend, "q1", {"a", "b", "c", "d"}, 'B'),
          MakeItem(DatasetId::kBlend, "q2", {"a", "b", "c", "d"}, 'D')};
}

InferenceRecord Rec(const McqItem& item, Language lang, RecordStatus status,
                    std::optional<char> label, const std::string& model = "m",
                    const std::string& raw = "raw") {
  InferenceRecord r;
  r.item_id = item.item_id;
  r.language = lang;
  r.model_name = model;
  r.prompt_hash = "h";
  r.raw_output = raw;
  r.status = status;
  r.extracted_label = label;
  r.created_at = "2024-01-01T00:00:00Z";
  return r;
}

TEST(MatrixTest, ConstructorSortsLanguagesCanonically) {
  ResponseMatrix m("d", "m", {Language::kTr, Language::kEn, Language::kHi}, {"x"}, {'A'});
  EXPECT_EQ(m.languages(), (std::vector<Language>{Language::kEn, Language::kHi, Language::kTr}));
  EXPECT_EQ(m.cell(0, 0).status, CellStatus::kMissing);
  EXPECT_THROW(ResponseMatrix("d", "m", {Language::kEn, Language::kEn}, {"x"}, {'A'}), Error);
  EXPECT_THROW(ResponseMatrix("d", "m", {Language::kEn}, {"x", "x"}, {'A', 'A'}), Error);
  EXPECT_THROW(ResponseMatrix("d", "m", {Language::kEn}, {"x"}, {}), Error);
}

TEST(MatrixTest, CellInvariants) {
  ResponseMatrix m("d", "m", {Language::kEn, Language::kTr}, {"x"}, {'B'});
  m.Set(0, 0, 'B', CellStatus::kOk);
  m.Set(0, 1, 'C', CellStatus::kInvalidOutput);
  EXPECT_TRUE(m.At("x", Language::kEn).correct);
  EXPECT_FALSE(m.At("x", Language::kTr).label.has_value());
  EXPECT_FALSE(m.At("x", Language::kTr).correct);
  EXPECT_THROW(m.Set(0, 0, std::nullopt, CellStatus::kOk), Error);
  EXPECT_THROW(m.At("y", Language::kEn), Error);
  EXPECT_THROW(m.At("x", Language::kHi), Error);
}

TEST(MatrixTest, BuildPrecedenceOkOverInvalidFirstOkWins) {
  auto items = Items();
  std::vector<InferenceRecord> recs = {
      Rec(items[0], Language::kEn, RecordStatus::kInvalidOutput, std::nullopt),
      Rec(items[0], Language::kEn, RecordStatus::kOk, 'B'),
      Rec(items[0], Language::kEn, RecordStatus::kOk, 'C'),
      Rec(items[0], Language::kTr, RecordStatus::kTransportError, std::nullopt),
      Rec(items[1], Language::kTr, RecordStatus::kInvalidOutput, std::nullopt),
      Rec(items[1], Language::kEn, RecordStatus::kOk, 'A', "other-model"),
      Rec(items[1], Language::kHi, RecordStatus::kOk, 'D'),  // language not requested
  };
  InferenceRecord stray = Rec(items[0], Language::kEn, RecordStatus::kOk, 'A');
  stray.item_id = "blend/unknown";
  recs.push_back(stray);
  MatrixBuild b = BuildMatrix(recs, items, "m", {Language::kEn, Language::kTr});
  const ResponseMatrix& m = b.matrix;
  EXPECT_EQ(m.dataset_id(), "blend");
  EXPECT_EQ(m.At(items[0].item_id, Language::kEn).label, 'B');
  EXPECT_TRUE(m.At(items[0].item_id, Language::kEn).correct);
  EXPECT_EQ(m.At(items[0].item_id, Language::kTr).status, CellStatus::kMissing);
  EXPECT_EQ(m.At(items[1].item_id, Language::kTr).status, CellStatus::kInvalidOutput);
  EXPECT_EQ(m.At(items[1].item_id, Language::kEn).status, CellStatus::kMissing);
  EXPECT_EQ(b.warnings, std::vector<std::string>{"blend/unknown"});

  auto missing = MissingCells(m);
  ASSERT_EQ(missing.size(), 2u);
  EXPECT_EQ(missing[0], std::make_pair(items[0].item_id, Language::kTr));
  EXPECT_EQ(missing[1], std::make_pair(items[1].item_id, Language::kEn));
  CellCounts counts = CountCells(m);
  EXPECT_EQ(counts.ok, 1u);
  EXPECT_EQ(counts.invalid, 1u);
  EXPECT_EQ(counts.missing, 2u);
}

TEST(MatrixTest, BuildIsDeterministicAndJsonRoundTrips) {
  auto items = Items();
  Rng rng(1);
  std::vector<InferenceRecord> recs;
  for (int i = 0; i < 40; ++i) {
    const auto& item = items[rng.UniformIndex(2)];
    const Language lang = AllLanguages()[rng.UniformIndex(16)];
    if (rng.Bernoulli(0.3)) {
      recs.push_back(Rec(item, lang, RecordStatus::kInvalidOutput, std::nullopt));
    } else {
      recs.push_back(Rec(item, lang, RecordStatus::kOk, static_cast<char>('A' + rng.UniformIndex(4))));
    }
  }
  const std::vector<Language> all(AllLanguages().begin(), AllLanguages().end());
  ResponseMatrix a = BuildMatrix(recs, items, "m", all).matrix;
  ResponseMatrix b = BuildMatrix(recs, items, "m", all).matrix;
  EXPECT_EQ(a, b);
  EXPECT_EQ(ToJson(a).dump(), ToJson(b).dump());
  EXPECT_EQ(ResponseMatrixFromJson(ToJson(a)), a);
}

TEST(MatrixTest, RowsSelectsAndReorders) {
  ResponseMatrix m("d", "m", {Language::kEn}, {"x", "y", "z"}, {'A', 'B', 'C'});
  m.Set(2, 0, 'C', CellStatus::kOk);
  ResponseMatrix r = m.Rows({"z", "x"});
  EXPECT_EQ(r.items(), (std::vector<std::string>{"z", "x"}));
  EXPECT_TRUE(r.cell(0, 0).correct);
  EXPECT_EQ(r.gold(1), 'A');
  EXPECT_THROW(m.Rows({"nope"}), Error);
}

}  // namespace
}  // namespace lsk
