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

#include "lsk/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lsk/error.h"
#include "lsk/rng.h"
#include "lsk/store.h"

namespace lsk {
namespace {

using nlohmann::json;

constexpr int kCentroidAttempts = 10000;
constexpr std::uint64_t kExpertStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStandInStream = 0xc2b2ae3d27d4eb4fULL;

std::vector<Language> Codes(const json& j) {
  std::vector<Language> out;
  for (const auto& c : j) out.push_back(ParseLanguage(c.get<std::string>()));
  return out;
}

json Codes(const std::vector<Language>& langs) {
  json out = json::array();
  for (Language l : langs) out.push_back(std::string(Code(l)));
  return out;
}

Vector RandomUnit(std::size_t dim, Rng& rng) {
  for (;;) {
    Vector v(dim);
    double norm2 = 0.0;
    for (double& x : v) {
      x = rng.Normal();
      norm2 += x * x;
    }
    if (norm2 <= 0.0) continue;
    const double norm = std::sqrt(norm2);
    for (double& x : v) x /= norm;
    return v;
  }
}

std::string ItemId(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synthetic/%06zu", i);
  return buf;
}

}  // namespace

void SyntheticSpec::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kInvalidArgument, msg); };
  if (n_items == 0) fail("n_items must be positive");
  if (k_true == 0) fail("k_true must be positive");
  if (k_true > n_items) fail("k_true exceeds n_items");
  if (dim == 0) fail("dim must be positive");
  if (!(p_other >= 0.0 && p_other <= 1.0 && p_expert >= 0.0 && p_expert <= 1.0)) {
    fail("probabilities must lie in [0, 1]");
  }
  if (p_other > p_expert) fail("p_other must not exceed p_expert");
  if (!(spread >= 0.0) || !std::isfinite(spread)) fail("spread must be non-negative");
  if (!(separation >= 0.0) || separation > 2.0) fail("separation must lie in [0, 2]");
  if (choice_count < 2 || choice_count > 26) fail("choice_count must lie in [2, 26]");
  for (std::size_t i = 0; i < languages.size(); ++i) {
    for (std::size_t j = i + 1; j < languages.size(); ++j) {
      if (languages[i] == languages[j]) fail("duplicate language in spec");
    }
  }
  if (!expert_per_cluster.empty()) {
    if (expert_per_cluster.size() != k_true) fail("expert_per_cluster needs k_true entries");
    const auto& langs = languages;
    for (Language l : expert_per_cluster) {
      if (!langs.empty() && std::find(langs.begin(), langs.end(), l) == langs.end()) {
        fail("expert language " + std::string(Code(l)) + " is not in languages");
      }
    }
  }
}

json ToJson(const SyntheticSpec& spec) {
  return {{"n_items", spec.n_items},
          {"k_true", spec.k_true},
          {"dim", spec.dim},
          {"languages", Codes(spec.languages)},
          {"expert_per_cluster", Codes(spec.expert_per_cluster)},
          {"p_expert", spec.p_expert},
          {"p_other", spec.p_other},
          {"spread", spec.spread},
          {"separation", spec.separation},
          {"choice_count", spec.choice_count},
          {"seed", spec.seed}};
}

SyntheticSpec SyntheticSpecFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "synthetic spec must be a JSON object");
  SyntheticSpec s;
  try {
    s.n_items = j.value("n_items", s.n_items);
    s.k_true = j.value("k_true", s.k_true);
    s.dim = j.value("dim", s.dim);
    if (j.contains("languages")) s.languages = Codes(j.at("languages"));
    if (j.contains("expert_per_cluster")) s.expert_per_cluster = Codes(j.at("expert_per_cluster"));
    s.p_expert = j.value("p_expert", s.p_expert);
    s.p_other = j.value("p_other", s.p_other);
    s.spread = j.value("spread", s.spread);
    s.separation = j.value("separation", s.separation);
    s.choice_count = j.value("choice_count", s.choice_count);
    s.seed = j.value("seed", s.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("synthetic spec: ") + e.what());
  }
  return s;
}

std::vector<Language> DistinctExperts(const std::vector<Language>& languages, std::size_t k,
                                      std::uint64_t seed) {
  if (languages.empty()) throw Error(ErrorKind::kInvalidArgument, "no languages to draw from");
  Rng rng(seed);
  std::vector<Language> out;
  std::vector<Language> pool;
  while (out.size() < k) {
    if (pool.empty()) {
      pool = languages;
      rng.Shuffle(std::span<Language>(pool));
    }
    out.push_back(pool.back());
    pool.pop_back();
  }
  return out;
}

SyntheticData GenerateSynthetic(SyntheticSpec spec) {
  if (spec.languages.empty()) {
    spec.languages.assign(AllLanguages().begin(), AllLanguages().end());
  }
  spec.languages = CanonicalSorted(spec.languages);
  if (spec.expert_per_cluster.empty()) {
    spec.expert_per_cluster =
        DistinctExperts(spec.languages, spec.k_true, spec.seed ^ kExpertStream);
  }
  spec.Validate();

  SyntheticData data;
  data.spec = spec;
  data.experts = spec.expert_per_cluster;
  Rng rng(spec.seed);

  const double min_d2 = spec.separation * spec.separation;
  while (data.centroids.size() < spec.k_true) {
    bool placed = false;
    for (int attempt = 0; attempt < kCentroidAttempts && !placed; ++attempt) {
      Vector c = RandomUnit(spec.dim, rng);
      bool ok = true;
      for (const auto& other : data.centroids) {
        if (SquaredDistance(c, other) < min_d2) {
          ok = false;
          break;
        }
      }
      if (ok) {
        data.centroids.push_back(std::move(c));
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorKind::kInvalidArgument,
                  "cannot place " + std::to_string(spec.k_true) + " centroids " +
                      std::to_string(spec.separation) + " apart in dimension " +
                      std::to_string(spec.dim));
    }
  }

  std::vector<std::string> ids;
  std::vector<char> gold;
  ids.reserve(spec.n_items);
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    const std::size_t c = i % spec.k_true;
    McqItem item;
    item.item_id = ItemId(i);
    item.dataset_id = DatasetId::kCustom;
    item.question = "Synthetic question " + std::to_string(i);
    for (std::size_t o = 0; o < spec.choice_count; ++o) {
      const char label = static_cast<char>('A' + o);
      item.choices.push_back({label, std::string("Option ") + label});
    }

    Vector v = data.centroids[c];
    if (spec.spread > 0.0) {
      for (double& x : v) x += spec.spread * rng.Normal();
      v = NormalizeEmbedding(std::move(v));
    }
    item.gold_label = static_cast<char>('A' + rng.UniformIndex(spec.choice_count));

    data.embeddings.emplace(item.item_id, std::move(v));
    data.cluster_of.push_back(c);
    ids.push_back(item.item_id);
    gold.push_back(item.gold_label);
    data.items.push_back(std::move(item));
  }

  data.matrix = ResponseMatrix(std::string(DatasetName(DatasetId::kCustom)), "synthetic",
                               spec.languages, ids, gold);
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    const Language expert = data.experts[data.cluster_of[i]];
    for (std::size_t l = 0; l < spec.languages.size(); ++l) {
      const double p = spec.languages[l] == expert ? spec.p_expert : spec.p_other;
      char label = gold[i];
      if (!rng.Bernoulli(p)) {
        // Any label but the gold one.
        const auto offset = 1 + rng.UniformIndex(spec.choice_count - 1);
        label = static_cast<char>('A' + (gold[i] - 'A' + offset) % spec.choice_count);
      }
      data.matrix.Set(i, l, label, CellStatus::kOk);
    }
  }
  return data;
}

std::vector<InferenceRecord> SyntheticRecords(const SyntheticData& data) {
  std::vector<InferenceRecord> out;
  const ResponseMatrix& m = data.matrix;
  out.reserve(m.item_count() * m.language_count());
  for (std::size_t i = 0; i < m.item_count(); ++i) {
    for (std::size_t l = 0; l < m.language_count(); ++l) {
      const AnswerCell& cell = m.cell(i, l);
      InferenceRecord rec;
      rec.item_id = m.items()[i];
      rec.language = m.languages()[l];
      rec.model_name = m.model_name();
      rec.raw_output = std::string("{\"final_answer\": \"") + *cell.label + "\"}";
      rec.prompt_hash =
          PromptHash(rec.item_id + "\x1f" + std::string(Code(rec.language)), rec.model_name);
      rec.extracted_label = cell.label;
      rec.status = RecordStatus::kOk;
      rec.attempt_count = 1;
      rec.created_at = "1970-01-01T00:00:00Z";
      out.push_back(std::move(rec));
    }
  }
  return out;
}

double ExpectedOracleAccuracy(const SyntheticSpec& spec) {
  const std::size_t n_lang = spec.languages.empty() ? kLanguageCount : spec.languages.size();
  return 1.0 - (1.0 - spec.p_expert) *
                   std::pow(1.0 - spec.p_other, static_cast<double>(n_lang - 1));
}

double ExpectedGlobalAccuracy(const SyntheticSpec& spec, const std::vector<Language>& experts) {
  if (experts.empty()) return spec.p_other;
  std::size_t top = 0;
  for (Language l : experts) {
    top = std::max<std::size_t>(top, std::count(experts.begin(), experts.end(), l));
  }
  const double k = static_cast<double>(experts.size());
  return (static_cast<double>(top) * spec.p_expert +
          (k - static_cast<double>(top)) * spec.p_other) /
         k;
}

SimulationResult RunSimulation(const SyntheticSpec& spec, const SimulationOptions& options) {
  if (options.k_values.empty()) throw Error(ErrorKind::kInvalidArgument, "no k values given");
  if (options.kmeans_seeds.empty()) throw Error(ErrorKind::kInvalidArgument, "no k-means seeds");
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
  SimulationResult r;
  r.data = GenerateSynthetic(spec);
  const SyntheticData& d = r.data;

  const std::size_t n = d.items.size();
  const auto train_count = static_cast<std::size_t>(
      std::llround(options.train_fraction * static_cast<double>(n)));
  if (train_count == 0 || train_count >= n) {
    throw Error(ErrorKind::kInvalidArgument, "split leaves an empty train or test set");
  }
  const Split split = SplitItems(d.items, {options.split_seed, train_count, n - train_count});
  for (const auto& item : split.train) r.train_ids.push_back(item.item_id);
  for (const auto& item : split.test) r.test_ids.push_back(item.item_id);

  const ResponseMatrix train = d.matrix.Rows(r.train_ids);
  r.global = TrainGlobalLanguage(train);
  std::vector<Vector> train_vectors;
  for (const auto& id : r.train_ids) train_vectors.push_back(d.embeddings.at(id));
  for (std::size_t k : options.k_values) {
    ClusterModel model = TrainLskWithClustering(
        train, KMeansBestOf(train_vectors, k, options.kmeans_seeds), options.kmeans_seeds.front());
    SelectorState state;
    state.cluster_model = &model;
    state.embeddings = &d.embeddings;
    const Fraction acc =
        Evaluate(Strategy::kLskExtractor, r.test_ids, d.matrix, state).accuracy();
    r.sweep.emplace_back(k, acc);
    if (r.sweep.size() == 1) r.model = std::move(model);
  }

  // Stand-ins: a uniformly random "LLM" choice per item, and one synthetic
  // country per planted cluster mapped to a random language.
  Rng stand_in(spec.seed ^ kStandInStream);
  const auto& langs = d.spec.languages;
  for (const auto& id : r.test_ids) {
    r.llm_cache[id] = langs[stand_in.UniformIndex(langs.size())];
  }
  for (std::size_t c = 0; c < d.spec.k_true; ++c) {
    r.country_map.Add("Region " + std::to_string(c + 1),
                      langs[stand_in.UniformIndex(langs.size())]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.item_country[d.items[i].item_id] = "Region " + std::to_string(d.cluster_of[i] + 1);
  }

  SelectorState state;
  state.global = &r.global;
  state.cluster_model = &r.model;
  state.embeddings = &d.embeddings;
  state.llm_cache = &r.llm_cache;
  state.country_map = &r.country_map;
  state.item_country = &r.item_country;
  for (Strategy s : AllStrategies()) {
    r.outcomes.push_back(Evaluate(s, r.test_ids, d.matrix, state));
  }

  // Each planted cluster is matched to the fitted cluster holding most of its
  // training items (lowest id on ties).
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(d.items[i].item_id, i);
  std::vector<std::vector<std::size_t>> overlap(d.spec.k_true,
                                                std::vector<std::size_t>(r.model.k, 0));
  for (const auto& id : r.train_ids) {
    const std::size_t i = index.at(id);
    ++overlap[d.cluster_of[i]][AssignNearest(d.embeddings.at(id), r.model.centroids)];
  }
  std::size_t recovered = 0;
  json planted = json::array();
  for (std::size_t c = 0; c < d.spec.k_true; ++c) {
    const auto best = static_cast<std::size_t>(
        std::max_element(overlap[c].begin(), overlap[c].end()) - overlap[c].begin());
    const bool hit = r.model.expert_language[best] == d.experts[c];
    recovered += hit ? 1 : 0;
    planted.push_back({{"cluster", c},
                       {"expert", std::string(Code(d.experts[c]))},
                       {"matched_cluster", best},
                       {"recovered", hit}});
  }
  r.expert_recovery = Fraction::Of(recovered, d.spec.k_true);
  r.ground_truth = {{"spec", ToJson(d.spec)},
                    {"planted_clusters", std::move(planted)},
                    {"expert_recovery", r.expert_recovery.Format(4)},
                    {"expected_oracle_accuracy", ExpectedOracleAccuracy(d.spec)},
                    {"expected_global_accuracy", ExpectedGlobalAccuracy(d.spec, d.experts)},
                    {"expected_lsk_accuracy", d.spec.p_expert}};
  return r;
}

}  // namespace lsk
