// SPDX-License-Identifier: Apache-2.0
//
// iswpt - transmit beamforming for integrated sensing and wireless power transfer
// Copyright (C) 2026 The iswpt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Dense complex linear algebra with the conventions the beamformer
// reconstructions depend on: ascending Hermitian eigendecomposition, PSD
// square root / factorization, and full QR with a nonnegative real
// R-diagonal. All functions are pure.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace iswpt {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace linalg {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;  // relative to max(1, ||A||_F)

// Square complex matrix equal to its conjugate transpose.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // Validates the Hermitian invariants (1e-12 absolute) and stores the exact
  // Hermitian part. Throws DimensionError / Error.
  explicit HermitianMatrix(const ComplexMatrix& a);

  // Stores (a + a^H) / 2 without checking; for results of numerical routines.
  static HermitianMatrix symmetrized(const ComplexMatrix& a);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix zero(Eigen::Index n);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;       // ascending
  ComplexMatrix eigenvectors;   // unitary, columns
};

struct QrResult {
  ComplexMatrix q;  // n x n unitary
  ComplexMatrix t;  // n x m upper triangular, real nonnegative diagonal
};

// Throws ConvergenceError when the iteration fails or the reconstruction
// contract ||A - U L U^H||_F <= 1e-9 max(1, ||A||_F) is violated.
EigenDecomposition hermitian_eig(const HermitianMatrix& a);

// Principal square root of a PSD matrix. Eigenvalues in [-1e-9 ||A||, 0) are
// clipped; anything more negative throws NotPsdError.
HermitianMatrix hermitian_sqrt(const HermitianMatrix& a);

// D with D D^H = R: lower Cholesky when R is positive definite, otherwise the
// Hermitian square root.
ComplexMatrix psd_factor(const HermitianMatrix& r);

// Full Householder QR of an n x m matrix (n >= m) with T's diagonal made real
// and nonnegative by rephasing Q's columns.
QrResult qr_full(const ComplexMatrix& b);

// Nearest PSD matrix in Frobenius norm.
HermitianMatrix project_psd(const HermitianMatrix& a);

double min_eigenvalue(const HermitianMatrix& a);

}  // namespace linalg

using linalg::HermitianMatrix;

}  // namespace iswpt
