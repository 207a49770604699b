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

// The bipartite states |phi> and |phi'> on (d+1) x (d+1) dimensions and the
// solver that picks (d, k, xi) so that <phi|phi'> equals a target overlap.

#include <cmath>
#include <stdexcept>
#include <string>

#include "psiont/linalg.hpp"

namespace psiont {

struct OverlapParams {
  int d = 2;
  int k = 1;
  double xi = 0.0;

  friend bool operator==(const OverlapParams&, const OverlapParams&) = default;
};

inline void validate(const OverlapParams& p) {
  if (p.d < 1 || p.k < 1) throw std::invalid_argument("OverlapParams: d and k must be positive");
  if (p.k >= p.d) throw std::invalid_argument("OverlapParams: k must be smaller than d");
  if (!(p.xi >= 0.0 && p.xi <= 1.0)) throw std::invalid_argument("OverlapParams: xi outside [0,1]");
}

/// Dimension of each local factor, d + 1 (levels |0>..|d>).
inline int local_dim(int d) { return d + 1; }

/// |jj> in the (d+1) x (d+1) product basis.
inline Eigen::Index diagonal_index(int d, int j) {
  return static_cast<Eigen::Index>(j) * local_dim(d) + j;
}

/// |phi> = d^{-1/2} sum_{j<d} |j>|j>.
inline ComplexVector phi_state(int d) {
  if (d < 1) throw std::invalid_argument("phi_state: d must be at least 1");
  const int m = local_dim(d);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(m) * m);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) v(diagonal_index(d, j)) = amp;
  return v;
}

/// |phi'> = k^{-1/2} (xi |00> + sum_{j=1}^{k-1} |jj> + sqrt(1 - xi^2) |dd>).
inline ComplexVector phi_prime_state(const OverlapParams& p) {
  validate(p);
  const int m = local_dim(p.d);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(m) * m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.k));
  v(diagonal_index(p.d, 0)) = scale * p.xi;
  for (int j = 1; j < p.k; ++j) v(diagonal_index(p.d, j)) = scale;
  v(diagonal_index(p.d, p.d)) += scale * std::sqrt(std::max(0.0, 1.0 - p.xi * p.xi));
  return v;
}

/// Parameters realising <phi|phi'> = alpha for 0 <= alpha < 1.
///
/// d is the smallest integer >= 1/(1 - alpha^2) (and >= min_d), k = ceil(alpha^2 d),
/// xi = alpha sqrt(k d) - k + 1. alpha = 0 gives (max(2, min_d), 1, 0).
inline OverlapParams solve_overlap(double alpha, int min_d = 2) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("solve_overlap: alpha must lie in [0,1), got " + std::to_string(alpha));
  }
  min_d = std::max(min_d, 2);
  if (alpha == 0.0) return {min_d, 1, 0.0};

  // Ceilings ignore excess below 1e-12 so that e.g. alpha = 0.7071067811865476
  // (alpha^2 one ulp above 1/2) still gives d = 2, k = 1.
  auto snapped_ceil = [](double x) { return static_cast<int>(std::ceil(x - 1e-12)); };
  const double a2 = alpha * alpha;
  int d = std::max(min_d, snapped_ceil(1.0 / (1.0 - a2)));
  // If rounding still leaves k = d or xi outside [0,1], any larger d is admissible.
  for (;; ++d) {
    const int k = std::max(1, snapped_ceil(a2 * d));
    if (k >= d) continue;
    double xi = alpha * std::sqrt(static_cast<double>(k) * d) - k + 1;
    if (xi < 0.0 && xi > -1e-12) xi = 0.0;
    if (xi > 1.0 && xi < 1.0 + 1e-12) xi = 1.0;
    if (xi < 0.0 || xi > 1.0) continue;
    return {d, k, xi};
  }
}

inline Complex overlap(const ComplexVector& u, const ComplexVector& v) { return inner(u, v); }

}  // namespace psiont
