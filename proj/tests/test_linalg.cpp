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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracle.hpp"
#include "psiont/linalg.hpp"
#include "psiont/random.hpp"

namespace {

using namespace psiont;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Linalg, BasisVectorAndInner) {
  const auto e1 = basis_vector(4, 1);
  EXPECT_EQ(e1.size(), 4);
  EXPECT_EQ(e1(1), Complex(1.0, 0.0));
  EXPECT_EQ(inner(e1, basis_vector(4, 2)), Complex(0.0, 0.0));
  EXPECT_THROW(basis_vector(3, 3), DimensionError);
}

TEST(Linalg, InnerIsConjugateLinearInFirstArgument) {
  ComplexVector u(2), v(2);
  u << Complex(0, 1), 0;
  v << 1, 0;
  EXPECT_NEAR(std::abs(inner(u, v) - Complex(0, -1)), 0.0, 1e-15);
}

TEST(Linalg, KronOrdering) {
  ComplexVector u(2), v(3);
  u << 1, 2;
  v << 3, 4, 5;
  const auto w = kron(u, v);
  ASSERT_EQ(w.size(), 6);
  EXPECT_EQ(w(0), Complex(3));
  EXPECT_EQ(w(2), Complex(5));
  EXPECT_EQ(w(3), Complex(6));
  EXPECT_EQ(w(5), Complex(10));
}

TEST(Linalg, KronMatrixActsLikeKronOfVectors) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = ComplexMatrix::Random(3, 3);
    const ComplexMatrix b = ComplexMatrix::Random(2, 2);
    const ComplexVector u = random_unit_vector(3, rng);
    const ComplexVector v = random_unit_vector(2, rng);
    EXPECT_LT((kron_matrix(a, b) * kron(u, v) - kron(a * u, b * v)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Linalg, FourierUnitaryIsUnitary) {
  for (int d = 2; d <= 9; ++d) {
    const auto f = fourier_unitary(d);
    EXPECT_LT(max_abs(f.adjoint() * f - ComplexMatrix::Identity(d, d)), 1e-12) << "d=" << d;
  }
}

TEST(Linalg, PauliShiftMovesBasisDown) {
  const auto x = pauli_shift(3);
  // X|l+1> = |l>
  EXPECT_EQ(x(0, 1), Complex(1));
  EXPECT_EQ(x(2, 0), Complex(1));
  EXPECT_EQ(x(1, 1), Complex(0));
}

TEST(Linalg, FractionalPowerEndpoints) {
  for (int d = 2; d <= 8; ++d) {
    EXPECT_LT(max_abs(fractional_pauli_power(d, 0.0) - ComplexMatrix::Identity(d, d)), 1e-12);
    EXPECT_LT(max_abs(fractional_pauli_power(d, 1.0) - pauli_shift(d)), 1e-12);
  }
}

TEST(Linalg, SquareRootOfQubitShift) {
  const auto h = fractional_pauli_power(2, 0.5);
  EXPECT_NEAR(std::abs(h(0, 0) - Complex(0.5, 0.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h(0, 1) - Complex(0.5, -0.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h(1, 0) - Complex(0.5, -0.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h(1, 1) - Complex(0.5, 0.5)), 0.0, 1e-12);
}

TEST(Linalg, FractionalPowerMatchesEigendecomposition) {
  for (int d = 2; d <= 7; ++d) {
    for (double t : {0.1, 0.25, 0.5, 0.77, 1.3}) {
      EXPECT_LT(max_abs(fractional_pauli_power(d, t) - oracle::shift_power(d, t)), 1e-10) << d << " " << t;
    }
  }
}

TEST(Linalg, FractionalPowerUnitaryAndSemigroup) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 10);
    const double s = u(rng), t = u(rng);
    const auto ps = fractional_pauli_power(d, s);
    const auto pt = fractional_pauli_power(d, t);
    EXPECT_LT(max_abs(ps.adjoint() * ps - ComplexMatrix::Identity(d, d)), 1e-12);
    EXPECT_LT(max_abs(ps * pt - fractional_pauli_power(d, s + t)), 1e-11);
  }
}

TEST(Linalg, FractionalPowerRejectsBadInput) {
  EXPECT_THROW(fractional_pauli_power(1, 0.5), std::invalid_argument);
  EXPECT_THROW(fractional_pauli_power(3, std::nan("")), std::invalid_argument);
}

TEST(Linalg, IsometryMapsPairOntoTargets) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index dim = 2 + trial % 5;
    const ComplexVector psi = random_unit_vector(dim, rng);
    const ComplexVector psi_p = random_unit_vector(dim, rng);
    const Complex ov = inner(psi, psi_p);
    // targets with the same overlap inside C^2 ⊗ C^... of a larger space
    const Eigen::Index out = 9;
    ComplexVector phi = basis_vector(out, 0);
    ComplexVector phi_p = ov * basis_vector(out, 0) + std::sqrt(1.0 - std::norm(ov)) * basis_vector(out, 4);
    const ComplexMatrix u = build_isometry(psi, psi_p, phi, phi_p);
    EXPECT_EQ(u.rows(), out);
    EXPECT_EQ(u.cols(), dim);
    EXPECT_LT(isometry_defect(u), 1e-12);
    EXPECT_LT((u * psi - phi).norm(), 1e-10);
    EXPECT_LT((u * psi_p - phi_p).norm(), 1e-10);
  }
}

TEST(Linalg, IsometryHandlesParallelPair) {
  const ComplexVector psi = basis_vector(2, 0);
  const ComplexVector phi = basis_vector(4, 3);
  const ComplexMatrix u = build_isometry(psi, psi, phi, phi);
  EXPECT_LT(isometry_defect(u), 1e-12);
  EXPECT_LT((u * psi - phi).norm(), 1e-12);
}

TEST(Linalg, IsometryRejectsOverlapMismatch) {
  const ComplexVector psi = basis_vector(2, 0);
  const ComplexVector psi_p = basis_vector(2, 1);
  const ComplexVector phi = basis_vector(3, 0);
  EXPECT_THROW(build_isometry(psi, psi_p, phi, phi), std::invalid_argument);
}

TEST(Linalg, IsometryRejectsUnnormalizedInput) {
  ComplexVector psi(2);
  psi << 1.0, 1.0;
  EXPECT_THROW(build_isometry(psi, psi, psi, psi), std::invalid_argument);
}

TEST(Linalg, IsometryRejectsSmallTarget) {
  EXPECT_THROW(build_isometry(basis_vector(3, 0), basis_vector(3, 1), basis_vector(2, 0), basis_vector(2, 1)),
               DimensionError);
}

}  // namespace
