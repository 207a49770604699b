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

// Randomised checks of the two total-variation inequalities, plus the even-d
// family on which the uniform-distance bound is attained.

#include <cstdint>
#include <vector>

#include "psiont/distance.hpp"
#include "psiont/random.hpp"

namespace psiont {

struct InequalityTally {
  int trials = 0;
  int violations = 0;
  double max_excess = -1.0;  // max over trials of lhs - rhs
};

struct TightnessRow {
  int d = 2;
  double distance_to_uniform = 0.0;
  double shift_distance = 0.0;
  double bound = 0.0;
  double equality_margin = 0.0;  // |bound - distance_to_uniform|
};

struct InequalitySuiteReport {
  std::uint64_t seed = 0;
  InequalityTally coupling;   // D(P_X, P_Y) <= 1 - sum_x P(x, x)
  InequalityTally uniform;    // D(P, 1/d) <= floor(d^2/4)/d D(P_{X+1}, P_X)
  std::vector<TightnessRow> tightness;

  bool passed(double equality_tol = 1e-12) const {
    if (coupling.violations != 0 || uniform.violations != 0) return false;
    for (const auto& row : tightness) {
      if (row.equality_margin > equality_tol) return false;
    }
    return true;
  }
};

/// (2/d, ..., 2/d, 0, ..., 0) with d/2 nonzero entries, d even.
inline FiniteDistribution tightness_distribution(int d) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("tightness_distribution: d must be even and >= 2");
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  for (int x = 0; x < d / 2; ++x) p[x] = 2.0 / d;
  return FiniteDistribution(std::move(p));
}

inline InequalitySuiteReport run_inequality_suites(std::uint64_t seed, int trials = 10000, double slack = 1e-12) {
  InequalitySuiteReport rep;
  rep.seed = seed;
  Rng rng(seed);
  std::uniform_int_distribution<int> size_dist(2, 12);

  auto tally = [slack](InequalityTally& t, double lhs, double rhs) {
    ++t.trials;
    t.max_excess = std::max(t.max_excess, lhs - rhs);
    if (lhs > rhs + slack) ++t.violations;
  };

  for (int i = 0; i < trials; ++i) {
    const int s = size_dist(rng);
    const auto cells = sample_simplex(s * s, rng);
    RealMatrix pxy(s, s);
    for (int x = 0; x < s; ++x) {
      for (int y = 0; y < s; ++y) pxy(x, y) = cells[static_cast<std::size_t>(x) * s + y];
    }
    const FiniteDistribution px(row_marginal(pxy));
    const FiniteDistribution py(column_marginal(pxy));
    tally(rep.coupling, total_variation(px, py), coupling_gap(pxy));
  }
  for (int i = 0; i < trials; ++i) {
    const int d = size_dist(rng);
    const FiniteDistribution p(sample_simplex(d, rng));
    tally(rep.uniform, total_variation(p, FiniteDistribution::uniform(d)), uniform_distance_bound(p, d));
  }
  for (int d = 2; d <= 12; d += 2) {
    const auto p = tightness_distribution(d);
    TightnessRow row;
    row.d = d;
    row.distance_to_uniform = total_variation(p, FiniteDistribution::uniform(d));
    row.shift_distance = total_variation(shift_distribution(p), p);
    row.bound = uniform_distance_bound(p, d);
    row.equality_margin = std::abs(row.bound - row.distance_to_uniform);
    rep.tightness.push_back(row);
  }
  return rep;
}

}  // namespace psiont
