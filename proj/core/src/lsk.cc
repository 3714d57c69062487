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

#include "lsk/lsk.h"

#include <cmath>

#include "lsk/error.h"
#include "lsk/io.h"

namespace lsk {

using nlohmann::json;

Vector NormalizeEmbedding(Vector raw) {
  double norm2 = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kDegenerate, "non-finite embedding value");
    norm2 += x * x;
  }
  if (raw.empty() || norm2 <= 0.0 || !std::isfinite(norm2)) {
    throw Error(ErrorKind::kDegenerate, "degenerate embedding");
  }
  const double norm = std::sqrt(norm2);
  for (double& x : raw) x /= norm;
  return raw;
}

std::string EmbeddingText(const McqItem& item) {
  std::string text = item.question;
  for (const auto& c : item.choices) {
    text += '\n';
    text += c.label;
    text += ". " + c.text;
  }
  return text;
}

EmbeddingCache EmbeddingCache::Load(const std::filesystem::path& path) {
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::kParse, "malformed embedding cache " + path.string());
  }
  EmbeddingCache cache(j.value("model", std::string()));
  try {
    for (const auto& e : j.at("entries")) {
      Entry entry;
      entry.item_id = e.at("item_id").get<std::string>();
      entry.content_hash = e.at("content_hash").get<std::string>();
      entry.values = e.at("values").get<Vector>();
      if (entry.values.size() != e.at("d").get<std::size_t>()) {
        throw Error(ErrorKind::kParse, "embedding cache: d does not match values for " +
                                           entry.item_id);
      }
      cache.Put(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, "embedding cache " + path.string() + ": " + e.what());
  }
  return cache;
}

void EmbeddingCache::Save(const std::filesystem::path& path) const {
  json entries = json::array();
  for (const auto& e : entries_) {
    entries.push_back({{"item_id", e.item_id},
                       {"content_hash", e.content_hash},
                       {"d", e.values.size()},
                       {"values", e.values}});
  }
  json j = {{"model", model_name_}, {"entries", std::move(entries)}};
  WriteFileAtomic(path, j.dump() + "\n");
}

const EmbeddingCache::Entry* EmbeddingCache::Find(const std::string& content_hash) const {
  auto it = by_hash_.find(content_hash);
  return it == by_hash_.end() ? nullptr : &entries_[it->second];
}

void EmbeddingCache::Put(Entry entry) {
  auto it = by_hash_.find(entry.content_hash);
  if (it != by_hash_.end()) {
    entries_[it->second] = std::move(entry);
    return;
  }
  by_hash_.emplace(entry.content_hash, entries_.size());
  entries_.push_back(std::move(entry));
}

EmbeddingTable EmbeddingCache::Table() const {
  EmbeddingTable table;
  for (const auto& e : entries_) table[e.item_id] = e.values;
  return table;
}

std::vector<EmbeddingVector> EmbedItems(const std::vector<McqItem>& items,
                                        EmbeddingClient& client, EmbeddingCache& cache,
                                        std::size_t batch_size) {
  if (items.empty()) throw Error(ErrorKind::kInvalidArgument, "no items to embed");
  if (batch_size == 0) batch_size = 1;

  std::vector<std::string> hashes;
  hashes.reserve(items.size());
  std::vector<std::size_t> pending;
  std::unordered_map<std::string, bool> queued;
  for (std::size_t i = 0; i < items.size(); ++i) {
    hashes.push_back(Sha256Hex(EmbeddingText(items[i])));
    if (cache.Find(hashes[i]) == nullptr && !queued[hashes[i]]) {
      queued[hashes[i]] = true;
      pending.push_back(i);
    }
  }

  for (std::size_t start = 0; start < pending.size(); start += batch_size) {
    const std::size_t end = std::min(pending.size(), start + batch_size);
    std::vector<std::string> texts;
    for (std::size_t p = start; p < end; ++p) texts.push_back(EmbeddingText(items[pending[p]]));
    std::vector<Vector> raw;
    try {
      raw = client.Embed(texts);
    } catch (const Error& e) {
      std::string ids;
      for (std::size_t p = start; p < pending.size(); ++p) {
        if (!ids.empty()) ids += ", ";
        ids += items[pending[p]].item_id;
      }
      throw Error(ErrorKind::kTransport,
                  std::string(e.what()) + "; unembedded items: " + ids);
    }
    for (std::size_t p = start; p < end; ++p) {
      const McqItem& item = items[pending[p]];
      Vector unit;
      try {
        unit = NormalizeEmbedding(std::move(raw[p - start]));
      } catch (const Error& e) {
        throw Error(ErrorKind::kDegenerate, std::string(e.what()) + " for " + item.item_id);
      }
      cache.Put({item.item_id, hashes[pending[p]], std::move(unit)});
    }
  }

  std::vector<EmbeddingVector> out;
  out.reserve(items.size());
  std::size_t dim = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto* entry = cache.Find(hashes[i]);
    if (i == 0) dim = entry->values.size();
    if (entry->values.size() != dim) {
      throw Error(ErrorKind::kDegenerate, "embedding dimensions differ across items");
    }
    out.push_back({items[i].item_id, entry->values});
  }
  return out;
}

ClusterModel TrainLskWithClustering(const ResponseMatrix& train_matrix,
                                    const KMeansResult& clustering, std::uint64_t seed) {
  const std::size_t k = clustering.centroids.size();
  ClusterModel model;
  model.k = k;
  model.seed = seed;
  model.languages = train_matrix.languages();
  model.centroids = clustering.centroids;
  model.inertia = clustering.inertia;
  model.member_counts.assign(k, 0);
  model.correct_counts.assign(k, std::vector<std::size_t>(model.languages.size(), 0));
  for (std::size_t i = 0; i < train_matrix.item_count(); ++i) {
    const std::size_t c = clustering.assignment[i];
    ++model.member_counts[c];
    for (std::size_t l = 0; l < model.languages.size(); ++l) {
      if (train_matrix.cell(i, l).correct) ++model.correct_counts[c][l];
    }
  }
  model.expert_language.assign(k, Language::kEn);
  for (std::size_t c = 0; c < k; ++c) {
    if (model.languages.empty()) break;
    // Languages are in canonical order, so a strict '>' keeps the earliest.
    std::size_t best = 0;
    for (std::size_t l = 1; l < model.languages.size(); ++l) {
      if (model.correct_counts[c][l] > model.correct_counts[c][best]) best = l;
    }
    model.expert_language[c] = model.languages[best];
  }
  return model;
}

ClusterModel TrainLsk(const EmbeddingTable& train_vectors, const ResponseMatrix& train_matrix,
                      std::size_t k, std::uint64_t seed) {
  std::vector<Vector> vectors;
  vectors.reserve(train_matrix.item_count());
  for (const auto& id : train_matrix.items()) {
    auto it = train_vectors.find(id);
    if (it == train_vectors.end()) {
      throw Error(ErrorKind::kNotFound, "no embedding for training item " + id);
    }
    vectors.push_back(it->second);
  }
  return TrainLskWithClustering(train_matrix, KMeansFit(vectors, k, seed), seed);
}

Language LskSelect(std::span<const double> vector, const ClusterModel& model) {
  return model.expert_language[AssignNearest(vector, model.centroids)];
}

json ToJson(const ClusterModel& model) {
  json langs = json::array();
  for (Language l : model.languages) langs.push_back(std::string(Code(l)));
  json clusters = json::array();
  for (std::size_t c = 0; c < model.k; ++c) {
    clusters.push_back({{"id", c},
                        {"expert", std::string(Code(model.expert_language[c]))},
                        {"members", model.member_counts[c]},
                        {"correct", model.correct_counts[c]},
                        {"centroid", model.centroids[c]}});
  }
  return {{"k", model.k},
          {"seed", model.seed},
          {"inertia", model.inertia},
          {"languages", std::move(langs)},
          {"clusters", std::move(clusters)}};
}

ClusterModel ClusterModelFromJson(const json& j) {
  ClusterModel model;
  try {
    model.k = j.at("k").get<std::size_t>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.inertia = j.value("inertia", 0.0);
    for (const auto& code : j.at("languages")) {
      model.languages.push_back(ParseLanguage(code.get<std::string>()));
    }
    for (const auto& c : j.at("clusters")) {
      model.expert_language.push_back(ParseLanguage(c.at("expert").get<std::string>()));
      model.member_counts.push_back(c.at("members").get<std::size_t>());
      model.correct_counts.push_back(c.at("correct").get<std::vector<std::size_t>>());
      model.centroids.push_back(c.at("centroid").get<Vector>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("cluster model: ") + e.what());
  }
  if (model.centroids.size() != model.k) {
    throw Error(ErrorKind::kParse, "cluster model: cluster count does not match k");
  }
  return model;
}

}  // namespace lsk
