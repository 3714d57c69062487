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

#include "support/oracles.h"

#include <cmath>
#include <limits>
#include <span>

namespace lsk::testing {

ResponseMatrix RandomMatrix(Rng& rng, const RandomMatrixOptions& options) {
  const std::size_t n = 1 + rng.UniformIndex(options.max_items);
  std::vector<Language> pool(AllLanguages().begin(), AllLanguages().end());
  rng.Shuffle(std::span<Language>(pool));
  pool.resize(1 + rng.UniformIndex(options.max_languages));
  const std::vector<Language> langs = CanonicalSorted(pool);
  std::vector<std::string> ids;
  std::vector<char> gold;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("item" + std::to_string(i));
    gold.push_back(static_cast<char>('A' + rng.UniformIndex(options.choice_count)));
  }
  ResponseMatrix m("custom", "model", langs, ids, gold);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < langs.size(); ++l) {
      const double u = rng.Uniform01();
      if (u < options.p_missing) continue;
      if (u < options.p_missing + options.p_invalid) {
        m.Set(i, l, std::nullopt, CellStatus::kInvalidOutput);
        continue;
      }
      m.Set(i, l, static_cast<char>('A' + rng.UniformIndex(options.choice_count)), CellStatus::kOk);
    }
  }
  return m;
}

std::optional<char> OracleMajority(const ResponseMatrix& m, std::size_t item) {
  int counts[26] = {};
  for (std::size_t l = 0; l < m.language_count(); ++l) {
    const AnswerCell& c = m.cell(item, l);
    if (c.status == CellStatus::kOk && c.label) ++counts[*c.label - 'A'];
  }
  int best = 0;
  for (int count : counts) best = count > best ? count : best;
  if (best == 0) return std::nullopt;
  // Walk the languages in canonical rank order, not column order.
  for (Language lang : AllLanguages()) {
    for (std::size_t l = 0; l < m.language_count(); ++l) {
      if (m.languages()[l] != lang) continue;
      const AnswerCell& c = m.cell(item, l);
      if (c.status == CellStatus::kOk && c.label && counts[*c.label - 'A'] == best) {
        return c.label;
      }
    }
  }
  return std::nullopt;
}

bool OracleRowCorrect(const ResponseMatrix& m, std::size_t item) {
  bool any = false;
  for (std::size_t l = 0; l < m.language_count(); ++l) {
    const AnswerCell& c = m.cell(item, l);
    any = any || (c.label.has_value() && *c.label == m.gold(item));
  }
  return any;
}

Language OracleColumnArgmax(const ResponseMatrix& m) {
  std::optional<Language> best;
  std::size_t best_count = 0;
  for (Language lang : AllLanguages()) {
    std::size_t col = m.language_count();
    for (std::size_t l = 0; l < m.language_count(); ++l) {
      if (m.languages()[l] == lang) col = l;
    }
    if (col == m.language_count()) continue;
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.item_count(); ++i) {
      const AnswerCell& c = m.cell(i, col);
      count += (c.label.has_value() && *c.label == m.gold(i)) ? 1 : 0;
    }
    if (!best || count > best_count) {
      best = lang;
      best_count = count;
    }
  }
  return *best;
}

std::vector<Vector> RandomUnitVectors(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<Vector> out(n, Vector(dim));
  for (auto& v : out) {
    double norm = 0.0;
    while (norm < 1e-9) {
      norm = 0.0;
      for (auto& x : v) {
        x = rng.Normal();
        norm += x * x;
      }
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
  }
  return out;
}

namespace {

double PartitionCost(const std::vector<Vector>& vectors, const std::vector<int>& group,
                     std::size_t k) {
  const std::size_t dim = vectors[0].size();
  double cost = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    Vector mean(dim, 0.0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (group[i] != static_cast<int>(g)) continue;
      for (std::size_t d = 0; d < dim; ++d) mean[d] += vectors[i][d];
    }
    double norm = 0.0;
    for (double x : mean) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : mean) x /= norm;
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (group[i] != static_cast<int>(g)) continue;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = vectors[i][d] - mean[d];
        cost += diff * diff;
      }
    }
  }
  return cost;
}

// Restricted growth strings enumerate each set partition exactly once.
void Enumerate(const std::vector<Vector>& vectors, std::size_t k, std::vector<int>& group,
               std::size_t i, int used, double& best) {
  if (i == vectors.size()) {
    if (used == static_cast<int>(k)) {
      const double cost = PartitionCost(vectors, group, k);
      best = cost < best ? cost : best;
    }
    return;
  }
  const int remaining = static_cast<int>(vectors.size() - i);
  if (used + remaining < static_cast<int>(k)) return;
  for (int g = 0; g <= used && g < static_cast<int>(k); ++g) {
    group[i] = g;
    Enumerate(vectors, k, group, i + 1, g == used ? used + 1 : used, best);
  }
}

}  // namespace

double ExhaustiveSphericalOptimum(const std::vector<Vector>& vectors, std::size_t k) {
  std::vector<int> group(vectors.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  Enumerate(vectors, k, group, 0, 0, best);
  return best;
}

}  // namespace lsk::testing
