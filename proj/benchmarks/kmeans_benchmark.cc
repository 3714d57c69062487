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

#include <cmath>
#include <vector>

#include "lsk/kmeans.h"
#include "lsk/rng.h"

namespace lsk {
namespace {

std::vector<Vector> UnitVectors(std::size_t n, std::size_t dim) {
  Rng rng(17);
  std::vector<Vector> out(n, Vector(dim));
  for (auto& v : out) {
    double norm2 = 0.0;
    for (double& x : v) {
      x = rng.Normal();
      norm2 += x * x;
    }
    for (double& x : v) x /= std::sqrt(norm2);
  }
  return out;
}

// Args: point count, cluster count; 32 dimensions.
void BM_KMeansFit(benchmark::State& state) {
  const auto vectors = UnitVectors(static_cast<std::size_t>(state.range(0)), 32);
  const auto k = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(KMeansFit(vectors, k, seed++).inertia);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeansFit)->Args({1920, 12})->Args({1920, 48})->Args({8000, 12});

void BM_AssignNearest(benchmark::State& state) {
  const auto vectors = UnitVectors(1024, 32);
  const auto centroids = UnitVectors(static_cast<std::size_t>(state.range(0)), 32);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AssignNearest(vectors[i++ % vectors.size()], centroids));
  }
}
BENCHMARK(BM_AssignNearest)->Arg(12)->Arg(48);

}  // namespace
}  // namespace lsk
