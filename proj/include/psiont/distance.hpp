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

// Total variation distance, cyclic shifts and the inequalities that bound a
// local outcome distribution's distance from uniform by I_{n,d}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "psiont/born.hpp"
#include "psiont/chained.hpp"

namespace psiont {

inline constexpr double kNormalizationTolerance = 1e-10;
inline constexpr double kEntrySlack = 1e-12;

/// Probability vector on {0, ..., size-1}.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;

  /// Validates the simplex constraints and clamps entries to [0, 1].
  explicit FiniteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("FiniteDistribution: empty support");
    double total = 0.0;
    for (double& p : probs_) {
      if (!std::isfinite(p) || p < -kEntrySlack || p > 1.0 + kEntrySlack) {
        throw std::invalid_argument("FiniteDistribution: entry outside [0,1]");
      }
      p = std::clamp(p, 0.0, 1.0);
      total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      throw std::invalid_argument("FiniteDistribution: probabilities do not sum to 1");
    }
  }

  static FiniteDistribution uniform(int size) {
    if (size < 1) throw std::invalid_argument("FiniteDistribution::uniform: size must be positive");
    return FiniteDistribution(std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
  }

  int support_size() const { return static_cast<int>(probs_.size()); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// D(P, Q) = (1/2) sum_x |P(x) - Q(x)|.
inline double total_variation(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.support_size() != q.support_size()) throw DimensionError("total_variation: support size mismatch");
  double s = 0.0;
  for (int x = 0; x < p.support_size(); ++x) s += std::abs(p[x] - q[x]);
  return std::min(1.0, 0.5 * s);
}

/// Distribution of X + 1 mod d: result[(x + 1) mod d] = P[x].
inline FiniteDistribution shift_distribution(const FiniteDistribution& p) {
  const int d = p.support_size();
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int x = 0; x < d; ++x) out[(x + 1) % d] = p[x];
  return FiniteDistribution(std::move(out));
}

/// 1 - sum_x P(x, x), which upper-bounds D(P_X, P_Y) for any coupling.
inline double coupling_gap(const RealMatrix& pxy) {
  if (pxy.rows() != pxy.cols()) throw DimensionError("coupling_gap: joint table must be square");
  if (std::abs(pxy.sum() - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument("coupling_gap: joint table is not normalized");
  }
  return 1.0 - pxy.diagonal().sum();
}

/// (1/d) floor(d^2/4) D(P_{X+1}, P_X), which upper-bounds D(P, uniform).
inline double uniform_distance_bound(const FiniteDistribution& p, int d) {
  if (p.support_size() != d) throw DimensionError("uniform_distance_bound: support size must equal d");
  const double floor_quarter = static_cast<double>((static_cast<long long>(d) * d) / 4);
  return floor_quarter / d * total_variation(shift_distribution(p), p);
}

/// P_X restricted to {0..d-1}, read off a row marginal of a (d+1)-outcome table.
inline FiniteDistribution restricted_marginal(const std::vector<double>& marginal, int d) {
  return FiniteDistribution(std::vector<double>(marginal.begin(), marginal.begin() + d));
}

/// Per-lambda conditionals P_{XY|AB lambda} and their weights P_Lambda(lambda).
struct LambdaMixture {
  std::vector<double> weights;
  std::vector<JointConditional> tables;
};

struct DeviationCertificate {
  double lhs = 0.0;  // sum_lambda P(lambda) sum_{x<d} |P(x|0,lambda) - 1/d|
  double rhs = 0.0;  // (d/2) I_{n,d}(sum_lambda P(lambda) P_lambda)
};

/// lhs and rhs of the per-lambda deviation bound; P(x|0,lambda) is read at b = 2n-1.
inline DeviationCertificate lemma3_certificate(const LambdaMixture& mixture, int n, int d) {
  if (mixture.weights.size() != mixture.tables.size() || mixture.tables.empty()) {
    throw std::invalid_argument("lemma3_certificate: weights and tables differ in length");
  }
  const int b0 = 2 * n - 1;
  DeviationCertificate cert;
  for (std::size_t i = 0; i < mixture.tables.size(); ++i) {
    const auto& t = mixture.tables[i];
    if (!t.has(0, b0)) throw std::out_of_range("lemma3_certificate: missing setting pair (0, 2n-1)");
    const std::vector<double> px = row_marginal(t.at(0, b0));
    double dev = 0.0;
    for (int x = 0; x < d; ++x) dev += std::abs(px[x] - 1.0 / d);
    cert.lhs += mixture.weights[i] * dev;
  }
  cert.rhs = 0.5 * d * i_nd(mix(mixture.weights, mixture.tables), n, d);
  return cert;
}

struct ShiftChain {
  double shift_distance = 0.0;  // D(P_{X+1|a0 lambda}, P_{X|a0 lambda})
  double i_value = 0.0;         // I_{n,d}(P_{XY|AB lambda})
};

/// Both ends of the per-lambda chain D(P_{X+1|0}, P_{X|0}) <= I_{n,d}(P_lambda).
inline ShiftChain shift_chain(const JointConditional& t, int n, int d) {
  const FiniteDistribution px = restricted_marginal(row_marginal(t.at(0, 2 * n - 1)), d);
  return {total_variation(shift_distribution(px), px), i_nd(t, n, d)};
}

}  // namespace psiont
