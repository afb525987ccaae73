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

#include "iswpt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iswpt/error.hpp"

namespace iswpt::linalg {

namespace {

double rel_scale(const ComplexMatrix& a) { return std::max(1.0, a.norm()); }

// Eigenvalues clipped at zero; throws if the input is indefinite beyond tolerance.
RealVector clipped_spectrum(const EigenDecomposition& eig, double frob, const char* who) {
  const double floor = -kPsdTol * std::max(1.0, frob);
  const double lowest = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  if (lowest < floor) {
    std::ostringstream msg;
    msg << who << ": matrix is indefinite, most negative eigenvalue " << lowest;
    throw NotPsdError(msg.str(), lowest);
  }
  return eig.eigenvalues.cwiseMax(0.0);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("HermitianMatrix: matrix is not square");
  }
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(a(i, i).imag()) > kHermitianTol) {
      throw Error("HermitianMatrix: diagonal entry is not real");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > kHermitianTol) {
        throw Error("HermitianMatrix: entry (i,j) differs from conj(entry(j,i))");
      }
    }
  }
  m_ = (a + a.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("HermitianMatrix: matrix is not square");
  }
  HermitianMatrix h;
  h.m_ = (a + a.adjoint()) * 0.5;
  return h;
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return symmetrized(ComplexMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  return symmetrized(ComplexMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("HermitianMatrix: dimension mismatch");
  return symmetrized(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("HermitianMatrix: dimension mismatch");
  return symmetrized(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return symmetrized(m_ * s); }

EigenDecomposition hermitian_eig(const HermitianMatrix& a) {
  const ComplexMatrix& m = a.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::ComputeEigenvectors);
  const auto n = m.rows();
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eig: QR iteration did not converge",
                           std::numeric_limits<double>::infinity());
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const double residual =
      (m - out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.adjoint()).norm();
  const double orth = (out.eigenvectors.adjoint() * out.eigenvectors -
                       ComplexMatrix::Identity(n, n)).norm();
  if (residual > 1e-9 * rel_scale(m) || orth > 1e-9) {
    std::ostringstream msg;
    msg << "hermitian_eig: reconstruction residual " << residual << ", orthogonality residual "
        << orth;
    throw ConvergenceError(msg.str(), std::max(residual, orth));
  }
  return out;
}

HermitianMatrix hermitian_sqrt(const HermitianMatrix& a) {
  const auto eig = hermitian_eig(a);
  const RealVector lam = clipped_spectrum(eig, a.norm(), "hermitian_sqrt");
  const ComplexMatrix& u = eig.eigenvectors;
  return HermitianMatrix::symmetrized(u * lam.cwiseSqrt().asDiagonal() * u.adjoint());
}

ComplexMatrix psd_factor(const HermitianMatrix& r) {
  const double scale = std::max(1.0, r.norm());
  Eigen::LLT<ComplexMatrix> llt(r.matrix());
  if (llt.info() == Eigen::Success) {
    ComplexMatrix d = llt.matrixL();
    const auto& diag = d.diagonal();
    const double dmin = diag.real().minCoeff();
    // A tiny pivot means R is numerically singular; the Cholesky factor is
    // then unreliable and the square root is used instead.
    if (dmin > 1e-7 * std::sqrt(scale) &&
        (d * d.adjoint() - r.matrix()).norm() <= 1e-8 * scale) {
      return d;
    }
  }
  ComplexMatrix root = hermitian_sqrt(r).matrix();
  const double residual = (root * root.adjoint() - r.matrix()).norm();
  if (residual > 1e-8 * scale) {
    throw ConvergenceError("psd_factor: factorization residual exceeds tolerance", residual);
  }
  return root;
}

QrResult qr_full(const ComplexMatrix& b) {
  const auto n = b.rows();
  const auto m = b.cols();
  if (n < m) throw DimensionError("qr_full: requires rows >= cols");
  Eigen::HouseholderQR<ComplexMatrix> qr(b);
  QrResult out;
  out.q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  out.t = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx d = out.t(k, k);
    const double mag = std::abs(d);
    if (mag == 0.0) continue;
    const cplx phase = d / mag;
    // B = Q T = (Q diag(phase)) (diag(conj(phase)) T)
    out.t.row(k) *= std::conj(phase);
    out.q.col(k) *= phase;
    out.t(k, k) = mag;
  }
  return out;
}

HermitianMatrix project_psd(const HermitianMatrix& a) {
  const auto eig = hermitian_eig(a);
  const ComplexMatrix& u = eig.eigenvectors;
  const RealVector lam = eig.eigenvalues.cwiseMax(0.0);
  return HermitianMatrix::symmetrized(u * lam.asDiagonal() * u.adjoint());
}

double min_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace iswpt::linalg
