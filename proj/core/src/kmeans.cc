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

#include "lsk/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lsk/error.h"
#include "lsk/rng.h"

namespace lsk {
namespace {

void NormalizeInPlace(Vector& v) {
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  const double norm = std::sqrt(norm2);
  for (double& x : v) x /= norm;
}

// Index drawn with probability proportional to weights[i]; requires a
// positive total.
std::size_t SampleWeighted(const std::vector<double>& weights, double total, Rng& rng) {
  const double target = rng.Uniform01() * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (acc > target) return i;
  }
  return last_positive;  // rounding left the target past the end
}

// Greedy k-means++: each step draws 2 + floor(ln k) candidates by D^2 and
// keeps the one that lowers the total potential most.
std::vector<Vector> SeedPlusPlus(const std::vector<Vector>& vectors, std::size_t k,
                                 Rng& rng) {
  const std::size_t n = vectors.size();
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  std::vector<Vector> centers;
  std::vector<bool> chosen(n, false);
  const std::size_t first = rng.UniformIndex(n);
  centers.push_back(vectors[first]);
  chosen[first] = true;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = SquaredDistance(vectors[i], centers[0]);

  std::vector<double> candidate_d2(n);
  std::vector<double> best_d2(n);
  while (centers.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      double best_potential = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t c = SampleWeighted(d2, total, rng);
        double potential = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          candidate_d2[i] = std::min(d2[i], SquaredDistance(vectors[i], vectors[c]));
          potential += candidate_d2[i];
        }
        if (potential < best_potential) {
          best_potential = potential;
          pick = c;
          best_d2.swap(candidate_d2);
        }
      }
      d2.swap(best_d2);
    } else {
      // Every remaining point coincides with a center.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) free.push_back(i);
      }
      pick = free[rng.UniformIndex(free.size())];
    }
    chosen[pick] = true;
    centers.push_back(vectors[pick]);
  }
  return centers;
}

}  // namespace

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::size_t AssignNearest(std::span<const double> v, const std::vector<Vector>& centroids) {
  if (centroids.empty()) throw Error(ErrorKind::kInvalidArgument, "no centroids");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (centroids[c].size() != v.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "dimension mismatch: vector has " + std::to_string(v.size()) +
                      ", centroid has " + std::to_string(centroids[c].size()));
    }
    const double d = SquaredDistance(v, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double Inertia(const std::vector<Vector>& vectors, const std::vector<Vector>& centroids,
               const std::vector<std::size_t>& assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    total += SquaredDistance(vectors[i], centroids[assignment[i]]);
  }
  return total;
}

KMeansResult KMeansFit(const std::vector<Vector>& vectors, std::size_t k,
                       std::uint64_t seed, const KMeansOptions& options) {
  const std::size_t n = vectors.size();
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be positive");
  if (k > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "k=" + std::to_string(k) + " exceeds point count " + std::to_string(n));
  }
  const std::size_t dim = vectors[0].size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(ErrorKind::kInvalidArgument, "vectors differ in dimension");
  }

  Rng rng(seed);
  KMeansResult result;
  result.seed = seed;
  result.centroids = SeedPlusPlus(vectors, k, rng);
  result.assignment.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    result.assignment[i] = AssignNearest(vectors[i], result.centroids);
  }
  result.inertia_trace.push_back(Inertia(vectors, result.centroids, result.assignment));

  std::vector<std::size_t> counts(k);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (iter > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        result.assignment[i] = AssignNearest(vectors[i], result.centroids);
      }
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t a : result.assignment) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Seize the point farthest from its own centroid among clusters that
      // can spare one; pigeonhole guarantees such a cluster exists.
      std::size_t victim = n;
      double victim_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t owner = result.assignment[i];
        if (counts[owner] < 2) continue;
        const double d = SquaredDistance(vectors[i], result.centroids[owner]);
        if (d > victim_d) {
          victim_d = d;
          victim = i;
        }
      }
      --counts[result.assignment[victim]];
      result.assignment[victim] = c;
      counts[c] = 1;
      result.centroids[c] = vectors[victim];
    }

    std::vector<Vector> sums(k, Vector(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      Vector& s = sums[result.assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += vectors[i][d];
    }
    double max_move = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double norm2 = 0.0;
      for (double x : sums[c]) norm2 += x * x;
      // A zero mean leaves every unit centroid equally good; keep the old one.
      if (norm2 > 1e-24) {
        NormalizeInPlace(sums[c]);
        max_move = std::max(max_move, std::sqrt(SquaredDistance(sums[c], result.centroids[c])));
        result.centroids[c] = std::move(sums[c]);
      }
    }
    result.iterations = iter + 1;
    result.inertia_trace.push_back(Inertia(vectors, result.centroids, result.assignment));
    if (max_move < options.tolerance) break;
  }

  // The returned assignment is the one the final centroids were averaged
  // from, so every cluster keeps at least one member.
  result.inertia = result.inertia_trace.back();
  return result;
}

KMeansResult KMeansBestOf(const std::vector<Vector>& vectors, std::size_t k,
                          const std::vector<std::uint64_t>& seeds,
                          const KMeansOptions& options) {
  if (seeds.empty()) throw Error(ErrorKind::kInvalidArgument, "no seeds given");
  KMeansResult best = KMeansFit(vectors, k, seeds[0], options);
  for (std::size_t i = 1; i < seeds.size(); ++i) {
    KMeansResult r = KMeansFit(vectors, k, seeds[i], options);
    if (r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

}  // namespace lsk
