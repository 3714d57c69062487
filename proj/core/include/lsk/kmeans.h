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
#include <span>
#include <vector>

namespace lsk {

using Vector = std::vector<double>;

struct KMeansOptions {
  int max_iterations = 100;
  // Stop once no centroid moves farther than this (Euclidean).
  double tolerance = 1e-6;
};

struct KMeansResult {
  std::vector<Vector> centroids;        // unit length
  std::vector<std::size_t> assignment;  // cluster per input vector
  double inertia = 0.0;                 // sum of squared distances
  // Inertia after the seeding step, then after every Lloyd iteration.
  std::vector<double> inertia_trace;
  int iterations = 0;
  std::uint64_t seed = 0;
};

double SquaredDistance(std::span<const double> a, std::span<const double> b);

// Nearest centroid by squared Euclidean distance; ties go to the lowest id.
// Throws Error(kInvalidArgument) on a dimension mismatch or no centroids.
std::size_t AssignNearest(std::span<const double> v, const std::vector<Vector>& centroids);

// Spherical k-means on unit vectors: k-means++ seeding from `seed`, Lloyd
// iterations with centroids renormalized to unit length after each mean
// step, and empty clusters repaired by seizing the point farthest from its
// centroid. Deterministic for a fixed (vectors order, k, seed). Throws when
// k == 0, k > |vectors|, or dimensions differ.
KMeansResult KMeansFit(const std::vector<Vector>& vectors, std::size_t k,
                       std::uint64_t seed, const KMeansOptions& options = {});

// Runs one fit per seed and keeps the lowest inertia (first seed on ties).
KMeansResult KMeansBestOf(const std::vector<Vector>& vectors, std::size_t k,
                          const std::vector<std::uint64_t>& seeds,
                          const KMeansOptions& options = {});

double Inertia(const std::vector<Vector>& vectors, const std::vector<Vector>& centroids,
               const std::vector<std::size_t>& assignment);

}  // namespace lsk
