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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "lsk/dataset.h"
#include "lsk/extract.h"

namespace lsk {
namespace {

const McqItem& Item() {
  static const McqItem item = MakeItem(
      DatasetId::kCustom, "Which garment is worn at a formal dinner?",
      {"red dress", "black formal suit", "white shirt", "blue jeans"}, 'B');
  return item;
}

void BM_Extract(benchmark::State& state, const std::string& raw) {
  for (auto _ : state) benchmark::DoNotOptimize(ExtractFinalAnswer(raw, Item()));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(raw.size()));
}

BENCHMARK_CAPTURE(BM_Extract, clean_json,
                  std::string(R"({"reasoning": "formal events call for suits", "final_answer": "B"})"));
BENCHMARK_CAPTURE(BM_Extract, fenced_json,
                  std::string("Sure.\n```json\n{\"reasoning\": \"...\", \"final_answer\": \"B. black "
                              "formal suit\"}\n```\n"));
BENCHMARK_CAPTURE(BM_Extract, text_match,
                  std::string("After weighing the options, the black formal suit fits best."));
BENCHMARK_CAPTURE(BM_Extract, long_garbage, std::string(4096, 'x'));

}  // namespace
}  // namespace lsk
