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

// Born-rule joint outcome tables p(x, y | a, b) for bipartite pure states.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psiont/linalg.hpp"
#include "psiont/measurements.hpp"
#include "psiont/states.hpp"

namespace psiont {

/// p(x, y) with x indexing rows (Alice) and y columns (Bob).
using OutcomeTable = RealMatrix;

/// Probabilities are real parts of Hermitian forms; larger imaginary parts are a bug.
inline constexpr double kImagTolerance = 1e-12;

namespace detail {

inline double clamp_probability(Complex z) {
  if (std::abs(z.imag()) > kImagTolerance) {
    throw std::logic_error("born_joint: probability has imaginary part " + std::to_string(z.imag()));
  }
  return std::clamp(z.real(), 0.0, 1.0);
}

inline ComplexMatrix reshape_state(const ComplexVector& state, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = state(static_cast<Eigen::Index>(i) * cols + j);
  }
  return m;
}

}  // namespace detail

/// p(x, y) = <state| Pi_x ⊗ Pi_y |state>.
///
/// With the state reshaped to the coefficient matrix M (A index major) this is
/// Tr(M^dagger Pi_x M Pi_y^T). Rank-one families use |u_x^dagger M conj(v_y)|^2.
inline OutcomeTable born_joint(const ComplexVector& state, const ProjectorFamily& fa,
                               const ProjectorFamily& fb) {
  if (state.size() != static_cast<Eigen::Index>(fa.dim) * fb.dim) {
    throw DimensionError("born_joint: state dimension does not match the two families");
  }
  require_finite(state, "born_joint");
  if (std::abs(state.norm() - 1.0) > 1e-10) throw std::invalid_argument("born_joint: state is not normalized");

  const ComplexMatrix m = detail::reshape_state(state, fa.dim, fb.dim);
  OutcomeTable p(fa.outcomes(), fb.outcomes());
  if (fa.rank_one() && fb.rank_one()) {
    ComplexMatrix ua(fa.dim, fa.outcomes());
    ComplexMatrix vb(fb.dim, fb.outcomes());
    for (int x = 0; x < fa.outcomes(); ++x) ua.col(x) = fa.directions[x];
    for (int y = 0; y < fb.outcomes(); ++y) vb.col(y) = fb.directions[y];
    const ComplexMatrix amp = ua.adjoint() * m * vb.conjugate();
    p = amp.cwiseAbs2().cwiseMin(1.0);
    return p;
  }
  for (int x = 0; x < fa.outcomes(); ++x) {
    const ComplexMatrix a = m.adjoint() * fa.projectors[x] * m;
    for (int y = 0; y < fb.outcomes(); ++y) {
      p(x, y) = detail::clamp_probability(a.cwiseProduct(fb.projectors[y]).sum());
    }
  }
  return p;
}

using SettingPair = std::pair<int, int>;

/// The 2n setting pairs entering I_{n,d}: (0, 2n-1) and every (a, b) with |a - b| = 1.
inline std::vector<SettingPair> chained_pairs(int n) {
  std::vector<SettingPair> pairs{{0, 2 * n - 1}};
  for (int a : alice_settings(n)) {
    if (a >= 2) pairs.emplace_back(a, a - 1);
    pairs.emplace_back(a, a + 1);
  }
  return pairs;
}

/// P(x, y | a, b) over a in A_n, b in B_n and outcomes {0..d}.
class JointConditional {
 public:
  JointConditional() = default;
  JointConditional(int n, int d) : n_(n), d_(d) {
    if (n < 1 || d < 1) throw std::invalid_argument("JointConditional: n and d must be positive");
  }

  int n() const { return n_; }
  int d() const { return d_; }
  int outcomes() const { return d_ + 1; }

  void set(int a, int b, OutcomeTable table) {
    if (!is_alice_setting(n_, a) || !is_bob_setting(n_, b)) {
      throw std::invalid_argument("JointConditional: setting pair outside A_n x B_n");
    }
    if (table.rows() != outcomes() || table.cols() != outcomes()) {
      throw DimensionError("JointConditional: table shape does not match outcomes");
    }
    tables_[{a, b}] = std::move(table);
  }

  bool has(int a, int b) const { return tables_.contains({a, b}); }

  const OutcomeTable& at(int a, int b) const {
    auto it = tables_.find({a, b});
    if (it == tables_.end()) {
      throw std::out_of_range("JointConditional: missing setting pair (" + std::to_string(a) + "," +
                              std::to_string(b) + ")");
    }
    return it->second;
  }

  const std::map<SettingPair, OutcomeTable>& tables() const { return tables_; }

  /// Largest |sum_{x,y} p - 1| over stored slices.
  double normalization_defect() const {
    double worst = 0.0;
    for (const auto& [key, t] : tables_) worst = std::max(worst, std::abs(t.sum() - 1.0));
    return worst;
  }

 private:
  int n_ = 1;
  int d_ = 1;
  std::map<SettingPair, OutcomeTable> tables_;
};

/// Mixture sum_i w_i P_i over tables sharing (n, d) and setting pairs.
inline JointConditional mix(const std::vector<double>& weights, const std::vector<JointConditional>& parts) {
  if (weights.size() != parts.size() || parts.empty()) throw std::invalid_argument("mix: weight/part mismatch");
  JointConditional out(parts.front().n(), parts.front().d());
  for (const auto& [key, t0] : parts.front().tables()) {
    OutcomeTable acc = OutcomeTable::Zero(t0.rows(), t0.cols());
    for (std::size_t i = 0; i < parts.size(); ++i) acc += weights[i] * parts[i].at(key.first, key.second);
    out.set(key.first, key.second, std::move(acc));
  }
  return out;
}

enum class Assembly {
  kFull,           // every (a, b) in A_n x B_n
  kChainedPairs,   // only the 2n pairs used by I_{n,d}
};

/// Born tables of a (d+1) x (d+1) state for the chained measurement families.
class FamilyCache {
 public:
  FamilyCache(int n, int d) : n_(n), d_(d) {
    for (int a : alice_settings(n)) alice_.emplace(a, alice_family(n, d, a));
    for (int b : bob_settings(n)) bob_.emplace(b, bob_family(n, d, b));
  }
  int n() const { return n_; }
  int d() const { return d_; }
  const ProjectorFamily& alice(int a) const { return alice_.at(a); }
  const ProjectorFamily& bob(int b) const { return bob_.at(b); }

 private:
  int n_;
  int d_;
  std::map<int, ProjectorFamily> alice_;
  std::map<int, ProjectorFamily> bob_;
};

inline JointConditional assemble_joint_conditional(const ComplexVector& state, const FamilyCache& families,
                                                   Assembly mode = Assembly::kFull) {
  const int n = families.n();
  const int d = families.d();
  JointConditional out(n, d);
  if (mode == Assembly::kChainedPairs) {
    for (auto [a, b] : chained_pairs(n)) out.set(a, b, born_joint(state, families.alice(a), families.bob(b)));
    return out;
  }
  for (int a : alice_settings(n)) {
    for (int b : bob_settings(n)) out.set(a, b, born_joint(state, families.alice(a), families.bob(b)));
  }
  return out;
}

inline JointConditional assemble_joint_conditional(const ComplexVector& state, int n, int d,
                                                   Assembly mode = Assembly::kFull) {
  const Eigen::Index dim = static_cast<Eigen::Index>(local_dim(d)) * local_dim(d);
  if (state.size() != dim) throw DimensionError("assemble_joint_conditional: state must live on (d+1)x(d+1)");
  return assemble_joint_conditional(state, FamilyCache(n, d), mode);
}

/// Row marginal P_X of a joint table.
inline std::vector<double> row_marginal(const OutcomeTable& t) {
  std::vector<double> m(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index x = 0; x < t.rows(); ++x) m[x] = t.row(x).sum();
  return m;
}

/// Column marginal P_Y of a joint table.
inline std::vector<double> column_marginal(const OutcomeTable& t) {
  std::vector<double> m(static_cast<std::size_t>(t.cols()));
  for (Eigen::Index y = 0; y < t.cols(); ++y) m[y] = t.col(y).sum();
  return m;
}

}  // namespace psiont
