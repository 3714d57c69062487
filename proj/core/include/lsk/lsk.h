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
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/fraction.h"
#include "lsk/gateway.h"
#include "lsk/kmeans.h"
#include "lsk/language.h"
#include "lsk/matrix.h"

namespace lsk {

// Unit-length embedding of one item.
struct EmbeddingVector {
  std::string item_id;
  Vector values;
};

// item_id -> unit vector.
using EmbeddingTable = std::unordered_map<std::string, Vector>;

// Returns `raw` scaled to unit L2 norm. Throws Error(kDegenerate) for a zero,
// empty or non-finite vector.
Vector NormalizeEmbedding(Vector raw);

// Text that gets embedded: the source-language question followed by the
// lettered choices, one per line.
std::string EmbeddingText(const McqItem& item);

// Persistent embedding cache keyed by content hash of EmbeddingText. Stored as
// JSON: {"model": ..., "entries": [{"item_id", "content_hash", "d", "values"}]}.
class EmbeddingCache {
 public:
  struct Entry {
    std::string item_id;
    std::string content_hash;
    Vector values;
  };

  explicit EmbeddingCache(std::string model_name = {}) : model_name_(std::move(model_name)) {}

  static EmbeddingCache Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  const Entry* Find(const std::string& content_hash) const;
  void Put(Entry entry);
  std::size_t size() const { return entries_.size(); }
  const std::string& model_name() const { return model_name_; }

  // All entries as an item_id -> vector table.
  EmbeddingTable Table() const;

 private:
  std::string model_name_;
  std::vector<Entry> entries_;  // insertion order, for stable files
  std::unordered_map<std::string, std::size_t> by_hash_;
};

// Embeds `items` through `client`, reusing and filling `cache`. Vectors come
// back L2-normalized, one per item in input order. Throws
// Error(kInvalidArgument) on empty input; on endpoint failure throws
// Error(kTransport) listing the ids left unembedded; a zero vector from the
// endpoint throws Error(kDegenerate).
std::vector<EmbeddingVector> EmbedItems(const std::vector<McqItem>& items,
                                        EmbeddingClient& client, EmbeddingCache& cache,
                                        std::size_t batch_size = 64);

// Trained language router: centroids plus per-cluster language accuracy.
struct ClusterModel {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<Language> languages;  // column order of correct_counts
  std::vector<Vector> centroids;
  std::vector<Language> expert_language;                    // per cluster
  std::vector<std::size_t> member_counts;                   // per cluster
  std::vector<std::vector<std::size_t>> correct_counts;     // [cluster][language]
  double inertia = 0.0;

  Fraction TrainAccuracy(std::size_t cluster, std::size_t lang) const {
    return Fraction::Of(correct_counts[cluster][lang], member_counts[cluster]);
  }
  std::size_t dimension() const { return centroids.empty() ? 0 : centroids[0].size(); }

  bool operator==(const ClusterModel&) const = default;
};

// Fits k-means on the training vectors (in train_matrix item order), assigns
// each training item to its cluster and picks, per cluster, the language with
// the most correct members (canonical order breaks ties). Missing and invalid
// cells count as incorrect. Every training item needs a vector.
ClusterModel TrainLsk(const EmbeddingTable& train_vectors, const ResponseMatrix& train_matrix,
                      std::size_t k, std::uint64_t seed);

// Same, with an already fitted clustering (e.g. from KMeansBestOf).
ClusterModel TrainLskWithClustering(const ResponseMatrix& train_matrix,
                                    const KMeansResult& clustering, std::uint64_t seed);

// Expert language of the nearest centroid. Throws on dimension mismatch.
Language LskSelect(std::span<const double> vector, const ClusterModel& model);

nlohmann::json ToJson(const ClusterModel& model);
ClusterModel ClusterModelFromJson(const nlohmann::json& j);

}  // namespace lsk
