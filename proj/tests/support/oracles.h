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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lsk/kmeans.h"
#include "lsk/language.h"
#include "lsk/matrix.h"
#include "lsk/rng.h"

// Independent reference implementations used to check the library. They are
// written for clarity over speed and share no code with the code under test.
namespace lsk::testing {

struct RandomMatrixOptions {
  std::size_t max_items = 50;
  std::size_t max_languages = 16;
  std::size_t choice_count = 4;
  double p_missing = 0.1;
  double p_invalid = 0.1;
};

// Random matrix with a random language subset (canonical order), random gold
// labels and random cell statuses.
ResponseMatrix RandomMatrix(Rng& rng, const RandomMatrixOptions& options = {});

// Plurality label over ok cells of one row; ties go to the label of the
// canonically first voter among the tied labels. Counts every letter A-Z
// independently of the library's tally.
std::optional<char> OracleMajority(const ResponseMatrix& m, std::size_t item);

// Row-wise OR of cell correctness.
bool OracleRowCorrect(const ResponseMatrix& m, std::size_t item);

// Column with the most correct cells; ties go to the canonically first.
Language OracleColumnArgmax(const ResponseMatrix& m);

// Random unit vectors in `dim` dimensions.
std::vector<Vector> RandomUnitVectors(Rng& rng, std::size_t n, std::size_t dim);

// Minimum spherical k-means inertia over every partition of `vectors` into
// exactly k non-empty groups, each scored against its normalized mean. Only
// practical for about a dozen points.
double ExhaustiveSphericalOptimum(const std::vector<Vector>& vectors, std::size_t k);

}  // namespace lsk::testing
