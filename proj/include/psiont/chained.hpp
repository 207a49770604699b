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

// The chained correlation functional
//   I_{n,d}(P) = 2n - sum_x P(x, x+1 mod d | 0, 2n-1) - sum_{|a-b|=1} sum_x P(x, x | a, b),
// its closed form on |phi> and the pi^2/(6n) envelope.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "psiont/born.hpp"

namespace psiont {

/// Evaluates I_{n,d}; outcome d never enters the sums.
inline double i_nd(const JointConditional& p, int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("i_nd: n and d must be positive");
  if (p.n() != n) throw std::invalid_argument("i_nd: table was built for a different n");
  if (p.outcomes() < d) throw DimensionError("i_nd: table has fewer than d outcomes");

  double value = 2.0 * n;
  const OutcomeTable& wrap = p.at(0, 2 * n - 1);
  for (int x = 0; x < d; ++x) value -= wrap(x, (x + 1) % d);
  const auto pairs = chained_pairs(n);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const OutcomeTable& t = p.at(pairs[i].first, pairs[i].second);
    for (int x = 0; x < d; ++x) value -= t(x, x);
  }
  return value;
}

/// 2n (1 - sin^2(pi/2n) / (d^2 sin^2(pi/2dn))).
inline double i_nd_closed_form(int n, int d) {
  if (n < 1 || d < 2) throw std::invalid_argument("i_nd_closed_form: need n >= 1, d >= 2");
  const double num = std::sin(std::numbers::pi / (2.0 * n));
  const double den = d * std::sin(std::numbers::pi / (2.0 * d * n));
  return 2.0 * n * (1.0 - (num * num) / (den * den));
}

inline double quantum_bound(int n) {
  if (n < 1) throw std::invalid_argument("quantum_bound: n must be positive");
  return std::numbers::pi * std::numbers::pi / (6.0 * n);
}

struct ChainedResult {
  int n = 1;
  int d = 2;
  double i_value = 0.0;
  double closed_form = 0.0;
  double bound = 0.0;

  double margin() const { return bound - i_value; }
};

/// I_{n,d} of the Born table of |phi>, computed over the 2n pairs it needs.
inline ChainedResult evaluate_chained(int n, int d) {
  const JointConditional table = assemble_joint_conditional(phi_state(d), n, d, Assembly::kChainedPairs);
  return {n, d, i_nd(table, n, d), i_nd_closed_form(n, d), quantum_bound(n)};
}

}  // namespace psiont
