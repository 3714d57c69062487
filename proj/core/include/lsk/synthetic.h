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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/language.h"
#include "lsk/lsk.h"
#include "lsk/matrix.h"
#include "lsk/selectors.h"

namespace lsk {

// Planted-cluster benchmark: k_true unit centroids, items spread evenly over
// them, and per-cluster expert languages that answer correctly more often.
struct SyntheticSpec {
  std::size_t n_items = 2400;
  std::size_t k_true = 12;
  std::size_t dim = 32;
  std::vector<Language> languages;          // empty means all 16
  std::vector<Language> expert_per_cluster;  // empty means DistinctExperts(...)
  double p_expert = 0.9;
  double p_other = 0.3;
  double spread = 0.05;      // per-coordinate noise standard deviation
  double separation = 1.0;   // minimum pairwise centroid distance
  std::size_t choice_count = 4;
  std::uint64_t seed = 1;

  // Throws Error(kInvalidArgument) on the first violated constraint.
  void Validate() const;
};

nlohmann::json ToJson(const SyntheticSpec& spec);
// Missing keys keep their defaults.
SyntheticSpec SyntheticSpecFromJson(const nlohmann::json& j);

// k languages drawn without replacement from a seeded permutation of
// `languages` (cycling through a fresh permutation once exhausted).
std::vector<Language> DistinctExperts(const std::vector<Language>& languages, std::size_t k,
                                      std::uint64_t seed);

struct SyntheticData {
  SyntheticSpec spec;  // with defaults filled in
  std::vector<McqItem> items;
  EmbeddingTable embeddings;
  ResponseMatrix matrix;
  std::vector<Vector> centroids;
  std::vector<std::size_t> cluster_of;  // planted cluster per item
  std::vector<Language> experts;        // planted expert per cluster
};

// Deterministic in `spec`. Throws Error(kInvalidArgument) when the centroid
// separation cannot be met within the attempt budget.
SyntheticData GenerateSynthetic(SyntheticSpec spec);

// Records that rebuild `data.matrix` through BuildMatrix.
std::vector<InferenceRecord> SyntheticRecords(const SyntheticData& data);

// 1 - (1 - p_expert) * (1 - p_other)^(|L| - 1).
double ExpectedOracleAccuracy(const SyntheticSpec& spec);
// Accuracy of always answering in the language that is expert for the most
// clusters, averaged over clusters of equal size.
double ExpectedGlobalAccuracy(const SyntheticSpec& spec, const std::vector<Language>& experts);

struct SimulationOptions {
  double train_fraction = 0.8;
  std::uint64_t split_seed = 0;
  std::vector<std::size_t> k_values = {12};
  // k-means seeds; the lowest-inertia fit is kept.
  std::vector<std::uint64_t> kmeans_seeds = {0};
};

struct SimulationResult {
  SyntheticData data;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  GlobalChoice global;
  ClusterModel model;  // for k_values.front()
  std::vector<std::pair<std::size_t, Fraction>> sweep;  // LSK test accuracy per k
  // Stand-ins for strategies that need a live model or real metadata.
  SelectionCache llm_cache;
  CountryMap country_map;
  std::unordered_map<std::string, std::string> item_country;
  std::vector<SelectorOutcome> outcomes;  // AllStrategies() order
  // Planted clusters whose dominant fitted cluster carries the planted expert.
  Fraction expert_recovery;
  nlohmann::json ground_truth;
};

// Generates data, splits it, trains global and LSK routers, and evaluates
// every strategy on the held-out items.
SimulationResult RunSimulation(const SyntheticSpec& spec, const SimulationOptions& options);

}  // namespace lsk
