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

// Setting-parameterised projective measurements on C^{d+1}. Outcomes x < d
// are rank-one projectors along fractional Pauli rotations of |x>; outcome d
// is always |d><d|.
//
// Alice's directions are the complex conjugates conj(X_d^{a/2n})|x>, Bob's
// are X_d^{b/2n}|y>. On |phi> = d^{-1/2} sum |jj> this pairing gives
// sum_x p(x,x|a,b) = sin^2(pi(a-b)/2n) / (d^2 sin^2(pi(a-b)/2dn)); with both
// sides unconjugated the amplitudes depend on a + b instead of a - b. At a = 0
// both conventions coincide with the computational basis.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "psiont/linalg.hpp"
#include "psiont/states.hpp"

namespace psiont {

struct ProjectorFamily {
  int dim = 0;
  std::vector<ComplexMatrix> projectors;  // indexed by outcome 0..dim-1
  // Unit vectors spanning each projector, when every projector is rank one.
  std::vector<ComplexVector> directions;

  int outcomes() const { return static_cast<int>(projectors.size()); }
  bool rank_one() const { return directions.size() == projectors.size(); }
};

/// A_n = {0, 2, ..., 2n-2}.
inline std::vector<int> alice_settings(int n) {
  std::vector<int> s;
  for (int a = 0; a < 2 * n; a += 2) s.push_back(a);
  return s;
}

/// B_n = {1, 3, ..., 2n-1}.
inline std::vector<int> bob_settings(int n) {
  std::vector<int> s;
  for (int b = 1; b < 2 * n; b += 2) s.push_back(b);
  return s;
}

inline bool is_alice_setting(int n, int a) { return a >= 0 && a < 2 * n && a % 2 == 0; }
inline bool is_bob_setting(int n, int b) { return b >= 1 && b < 2 * n && b % 2 == 1; }

namespace detail {

inline ComplexVector embed(const ComplexVector& v, int dim) {
  ComplexVector out = ComplexVector::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

inline ComplexVector zeta_from_power(int n, int d, int j, int s) {
  const ComplexMatrix m = fractional_pauli_power(d, static_cast<double>(s) / (2.0 * n));
  return embed(m.col(j), local_dim(d));
}

}  // namespace detail

/// |zeta_j^s> = X_d^{s/2n} |j>, embedded in C^{d+1} with zero |d> component.
///
/// Uses the closed form
///   (1/d) sum_m (1 - e^{i s pi/n}) / (1 - e^{(2 pi i/d)(m + s/2n - j)}) |m>
/// for s != 0, falling back to the matrix power if a denominator drops below 1e-9.
inline ComplexVector zeta_vector(int n, int d, int j, int s) {
  if (n < 1 || d < 2) throw std::invalid_argument("zeta_vector: need n >= 1 and d >= 2");
  if (j < 0 || j >= d) throw std::out_of_range("zeta_vector: j out of range");
  if (s < 0 || s >= 2 * n) throw std::out_of_range("zeta_vector: s out of range");
  if (s == 0) return basis_vector(local_dim(d), j);

  const double frac = static_cast<double>(s) / (2.0 * n);
  const Complex numer = 1.0 - std::polar(1.0, std::numbers::pi * s / n);
  ComplexVector v = ComplexVector::Zero(local_dim(d));
  for (int m = 0; m < d; ++m) {
    const Complex denom = 1.0 - std::polar(1.0, 2.0 * std::numbers::pi * (m + frac - j) / d);
    if (std::abs(denom) <= 1e-9) return detail::zeta_from_power(n, d, j, s);
    v(m) = numer / (denom * static_cast<double>(d));
  }
  return v;
}

namespace detail {

inline ProjectorFamily rank_one_family(std::vector<ComplexVector> dirs) {
  ProjectorFamily f;
  f.dim = static_cast<int>(dirs.front().size());
  for (const auto& v : dirs) f.projectors.push_back(v * v.adjoint());
  f.directions = std::move(dirs);
  return f;
}

inline ProjectorFamily rotated_family(int n, int d, int setting, bool conjugate) {
  const int dim = local_dim(d);
  std::vector<ComplexVector> dirs;
  dirs.reserve(dim);
  for (int x = 0; x < d; ++x) {
    ComplexVector z = zeta_vector(n, d, x, setting);
    if (conjugate) z = z.conjugate();
    dirs.push_back(std::move(z));
  }
  dirs.push_back(basis_vector(dim, d));
  return rank_one_family(std::move(dirs));
}

}  // namespace detail

/// {Pi^a_x}_{x=0..d} for a in A_n, along conj(zeta_x^a) and |d>.
inline ProjectorFamily alice_family(int n, int d, int a) {
  if (!is_alice_setting(n, a)) {
    throw std::invalid_argument("alice_family: setting " + std::to_string(a) + " not in A_n");
  }
  return detail::rotated_family(n, d, a, /*conjugate=*/true);
}

/// {Pi^b_y}_{y=0..d} for b in B_n, along zeta_y^b and |d>.
inline ProjectorFamily bob_family(int n, int d, int b) {
  if (!is_bob_setting(n, b)) {
    throw std::invalid_argument("bob_family: setting " + std::to_string(b) + " not in B_n");
  }
  return detail::rotated_family(n, d, b, /*conjugate=*/false);
}

struct FamilyDefects {
  double hermiticity = 0.0;
  double idempotence = 0.0;
  double orthogonality = 0.0;
  double completeness = 0.0;
};

inline FamilyDefects family_defects(const ProjectorFamily& f) {
  FamilyDefects out;
  ComplexMatrix sum = ComplexMatrix::Zero(f.dim, f.dim);
  for (std::size_t x = 0; x < f.projectors.size(); ++x) {
    const auto& p = f.projectors[x];
    out.hermiticity = std::max(out.hermiticity, (p - p.adjoint()).cwiseAbs().maxCoeff());
    out.idempotence = std::max(out.idempotence, (p * p - p).cwiseAbs().maxCoeff());
    for (std::size_t y = x + 1; y < f.projectors.size(); ++y) {
      out.orthogonality = std::max(out.orthogonality, (p * f.projectors[y]).cwiseAbs().maxCoeff());
    }
    sum += p;
  }
  out.completeness = (sum - ComplexMatrix::Identity(f.dim, f.dim)).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace psiont
