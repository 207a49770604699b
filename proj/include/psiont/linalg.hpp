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

// Dense complex linear algebra at desk scale. Vectors and matrices are Eigen
// column vectors / dense matrices; this header adds the tensor-product index
// convention, the fractional powers of the generalised Pauli shift and the
// two-vector isometry completion.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace psiont {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

// Algebraic identities.
inline constexpr double kEpsLin = 1e-12;
// Quantities accumulated over O(d n) terms.
inline constexpr double kEpsStat = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument(std::string(what) + ": non-finite entry");
      }
    }
  }
}

inline ComplexVector basis_vector(Eigen::Index dim, Eigen::Index j) {
  if (j < 0 || j >= dim) throw DimensionError("basis_vector: index out of range");
  ComplexVector e = ComplexVector::Zero(dim);
  e(j) = 1.0;
  return e;
}

/// <u|v>, conjugate-linear in the first argument.
inline Complex inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw DimensionError("inner: dimension mismatch");
  return u.dot(v);  // Eigen's dot conjugates the left operand
}

/// Tensor product with the A factor major: entry i * v.size() + j is u_i v_j.
inline ComplexVector kron(const ComplexVector& u, const ComplexVector& v) {
  ComplexVector out(u.size() * v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out.segment(i * v.size(), v.size()) = u(i) * v;
  }
  return out;
}

/// Matrix tensor product, consistent with kron: (M ⊗ N)(u ⊗ v) = Mu ⊗ Nv.
inline ComplexMatrix kron_matrix(const ComplexMatrix& m, const ComplexMatrix& n) {
  ComplexMatrix out(m.rows() * n.rows(), m.cols() * n.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.block(i * n.rows(), j * n.cols(), n.rows(), n.cols()) = m(i, j) * n;
    }
  }
  return out;
}

/// U_d = d^{-1/2} sum_{jk} e^{2 pi i jk/d} |j><k|.
inline ComplexMatrix fourier_unitary(int d) {
  if (d < 1) throw std::invalid_argument("fourier_unitary: d must be positive");
  ComplexMatrix u(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      // reduce jk mod d before the trig call to keep the phase argument small
      const double angle = 2.0 * std::numbers::pi * ((j * k) % d) / d;
      u(j, k) = std::polar(scale, angle);
    }
  }
  return u;
}

/// The cyclic shift X_d = sum_l |l><l+1 mod d|, built entrywise.
inline ComplexMatrix pauli_shift(int d) {
  if (d < 2) throw std::invalid_argument("pauli_shift: d must be at least 2");
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l) x(l, (l + 1) % d) = 1.0;
  return x;
}

/// X_d^t = U_d Z_d^t U_d^dagger with Z_d^t = diag(e^{2 pi i j t/d}), j = 0..d-1.
///
/// The phase labels j are the eigenvalue indices 0..d-1 without re-centering,
/// so t = 1 reproduces X_d exactly and M(t1) M(t2) = M(t1 + t2).
inline ComplexMatrix fractional_pauli_power(int d, double t) {
  if (d < 2) throw std::invalid_argument("fractional_pauli_power: d must be at least 2");
  if (!std::isfinite(t)) throw std::invalid_argument("fractional_pauli_power: t must be finite");
  const ComplexMatrix u = fourier_unitary(d);
  Eigen::VectorXcd phases(d);
  for (int j = 0; j < d; ++j) phases(j) = std::polar(1.0, 2.0 * std::numbers::pi * j * t / d);
  return u * phases.asDiagonal() * u.adjoint();
}

namespace detail {

// Two passes of classical Gram-Schmidt against the columns of `basis`.
inline ComplexVector orthogonalize(ComplexVector v, const std::vector<ComplexVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b.dot(v) * b;
  }
  return v;
}

// Extends an orthonormal list with standard basis vectors (lowest index first)
// until it holds `target` vectors.
inline void complete_orthonormal(std::vector<ComplexVector>& basis, Eigen::Index dim,
                                 std::size_t target) {
  for (Eigen::Index j = 0; j < dim && basis.size() < target; ++j) {
    ComplexVector r = orthogonalize(basis_vector(dim, j), basis);
    const double norm = r.norm();
    if (norm > 1e-6) basis.push_back(r / norm);
  }
  if (basis.size() < target) throw std::logic_error("complete_orthonormal: rank deficit");
}

}  // namespace detail

/// Isometry U with U psi = phi and U psi_p = phi_p, given <psi|psi_p> = <phi|phi_p>.
///
/// Writes psi_p = alpha psi + beta psi_perp and phi_p = alpha phi + beta phi_perp,
/// then sends psi -> phi, psi_perp -> phi_perp and an orthonormal completion of
/// the domain onto unused orthonormal directions of the target. When
/// |alpha| = 1 the perpendicular pair is the lowest-index basis vector
/// orthogonalised against psi (resp. phi).
inline ComplexMatrix build_isometry(const ComplexVector& psi, const ComplexVector& psi_p,
                                    const ComplexVector& phi, const ComplexVector& phi_p,
                                    double tol = 1e-9) {
  if (psi.size() != psi_p.size() || phi.size() != phi_p.size()) {
    throw DimensionError("build_isometry: pair dimension mismatch");
  }
  if (phi.size() < psi.size()) throw DimensionError("build_isometry: target dimension too small");
  for (const ComplexVector* v : {&psi, &psi_p, &phi, &phi_p}) {
    require_finite(*v, "build_isometry");
    if (std::abs(v->norm() - 1.0) > tol) throw std::invalid_argument("build_isometry: inputs must be unit vectors");
  }
  const Complex alpha = inner(psi, psi_p);
  if (std::abs(alpha - inner(phi, phi_p)) > tol) {
    throw std::invalid_argument("build_isometry: overlaps differ");
  }

  const Eigen::Index dim_in = psi.size();
  const Eigen::Index dim_out = phi.size();
  std::vector<ComplexVector> domain{psi};
  std::vector<ComplexVector> image{phi};

  const double beta = std::sqrt(std::max(0.0, 1.0 - std::norm(alpha)));
  if (dim_in > 1) {
    if (beta > 1e-7) {
      ComplexVector psi_perp = detail::orthogonalize(psi_p - alpha * psi, domain);
      ComplexVector phi_perp = detail::orthogonalize(phi_p - alpha * phi, image);
      domain.push_back(psi_perp / psi_perp.norm());
      image.push_back(phi_perp / phi_perp.norm());
    } else {
      detail::complete_orthonormal(domain, dim_in, 2);
      detail::complete_orthonormal(image, dim_out, 2);
    }
  }
  detail::complete_orthonormal(domain, dim_in, static_cast<std::size_t>(dim_in));
  detail::complete_orthonormal(image, dim_out, static_cast<std::size_t>(dim_in));

  ComplexMatrix u = ComplexMatrix::Zero(dim_out, dim_in);
  for (std::size_t c = 0; c < domain.size(); ++c) u += image[c] * domain[c].adjoint();
  return u;
}

/// max |(M^dagger M - I)_{ij}|.
inline double isometry_defect(const ComplexMatrix& m) {
  const ComplexMatrix g = m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

}  // namespace psiont
