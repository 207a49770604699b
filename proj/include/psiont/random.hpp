// Copyright 2026 The psiont Authors
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

// Seeded generators for property checks: uniform points on the probability
// simplex (symmetric Dirichlet(1)) and Haar-random unit vectors.

#include <cstdint>
#include <random>
#include <vector>

#include "psiont/linalg.hpp"

namespace psiont {

using Rng = std::mt19937_64;

/// Symmetric Dirichlet(1): normalized i.i.d. Exp(1) variates.
inline std::vector<double> sample_simplex(int size, Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> v(static_cast<std::size_t>(size));
  double total = 0.0;
  for (double& x : v) total += (x = exp1(rng));
  for (double& x : v) x /= total;
  return v;
}

/// Normalized complex Gaussian vector.
inline ComplexVector random_unit_vector(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace psiont
