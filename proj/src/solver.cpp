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

#include "iswpt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "iswpt/error.hpp"

namespace iswpt {

namespace {

constexpr double kPenaltyMin = 1e-4;
constexpr double kPenaltyMax = 1e4;
constexpr double kPenaltyFactor = 2.0;
constexpr double kBalanceRatio = 10.0;
constexpr int kCheckInterval = 5;
constexpr int kAdaptInterval = 25;
constexpr int kRuizIterations = 25;
constexpr double kProximal = 1e-6;  // sigma
constexpr int kStallWindow = 2000;
constexpr int kInteriorPointIters = 200;

// Real coordinates of an n x n Hermitian matrix: n diagonal entries followed by
// sqrt(2) Re / sqrt(2) Im of each strict upper entry, so that the Euclidean
// inner product equals Re tr(A^H X).
class Svec {
 public:
  explicit Svec(Eigen::Index n) : n_(n) {}
  Eigen::Index size() const { return n_ * n_; }

  template <typename Out>
  void pack(const ComplexMatrix& h, Out&& out) const {
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n_; ++i) out(k++) = h(i, i).real();
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = i + 1; j < n_; ++j) {
        out(k++) = std::numbers::sqrt2 * h(i, j).real();
        out(k++) = std::numbers::sqrt2 * h(i, j).imag();
      }
    }
  }

  template <typename In>
  ComplexMatrix unpack(const In& in) const {
    ComplexMatrix h(n_, n_);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n_; ++i) h(i, i) = in(k++);
    constexpr double inv = 1.0 / std::numbers::sqrt2;
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = i + 1; j < n_; ++j) {
        const double re = in(k++) * inv;
        const double im = in(k++) * inv;
        h(i, j) = cplx(re, im);
        h(j, i) = cplx(re, -im);
      }
    }
    return h;
  }

 private:
  Eigen::Index n_;
};

// Variable vector [svec(X) | gamma | alpha].
struct Layout {
  Svec svec;
  Eigen::Index nx;  // matrix block length
  Eigen::Index ngamma;
  bool has_alpha;
  Eigen::Index size() const { return nx + ngamma + (has_alpha ? 1 : 0); }
  Eigen::Index gamma_begin() const { return nx; }
  Eigen::Index alpha_index() const { return nx + ngamma; }
};

RealVector functional_row(const Layout& lay, const AffineFunctional& f) {
  RealVector row = RealVector::Zero(lay.size());
  lay.svec.pack(f.matrix_coefficient.matrix(), row.head(lay.nx));
  for (Eigen::Index m = 0; m < f.gamma_coefficients.size(); ++m) {
    row(lay.gamma_begin() + m) = f.gamma_coefficients(m);
  }
  if (lay.has_alpha) row(lay.alpha_index()) = f.alpha_coefficient;
  return row;
}

double inf_norm(const RealVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Problem data after equilibration: variables z = D zhat, cost multiplied by
// `cost_scale`, equalities replaced by an orthonormal row basis.
struct ScaledProblem {
  RealMatrix p;       // n x n
  RealVector q;       // n
  RealMatrix a;       // r x n, orthonormal rows
  RealVector b;       // r
  RealVector d;       // variable scaling
  double cost_scale = 1.0;
  bool inconsistent = false;
};

ScaledProblem equilibrate(const Layout& lay, const RealMatrix& p, const RealVector& q,
                          const RealMatrix& e, const RealVector& f) {
  const Eigen::Index n = lay.size();
  const Eigen::Index m = e.rows();
  ScaledProblem s;
  s.d = RealVector::Ones(n);
  RealVector es = RealVector::Ones(m);
  RealMatrix ph = p;
  RealMatrix eh = e;

  // Ruiz equilibration of [P E^T; E 0] with one common factor for the matrix
  // block, so the PSD cone is preserved under the change of variables.
  for (int it = 0; it < kRuizIterations; ++it) {
    RealVector col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = ph.col(j).cwiseAbs().maxCoeff();
      if (m > 0) v = std::max(v, eh.col(j).cwiseAbs().maxCoeff());
      col(j) = std::clamp(v, 1e-4, 1e4);
    }
    RealVector delta = col.cwiseSqrt().cwiseInverse();
    if (lay.nx > 0) {
      const double block = col.head(lay.nx).maxCoeff();
      delta.head(lay.nx).setConstant(1.0 / std::sqrt(block));
    }
    RealVector delta_e(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      delta_e(i) = 1.0 / std::sqrt(std::clamp(eh.row(i).cwiseAbs().maxCoeff(), 1e-4, 1e4));
    }
    ph = delta.asDiagonal() * ph * delta.asDiagonal();
    eh = delta_e.asDiagonal() * eh * delta.asDiagonal();
    s.d = s.d.cwiseProduct(delta);
    es = es.cwiseProduct(delta_e);
  }

  RealVector qh = s.d.cwiseProduct(q);
  double mean_col = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) mean_col += ph.col(j).cwiseAbs().maxCoeff();
  mean_col /= static_cast<double>(n);
  const double cost_norm = std::max(mean_col, inf_norm(qh));
  s.cost_scale = cost_norm > 0.0 ? 1.0 / cost_norm : 1.0;
  s.p = ph * s.cost_scale;
  s.q = qh * s.cost_scale;

  if (m == 0) {
    s.a = RealMatrix::Zero(0, n);
    s.b = RealVector::Zero(0);
    return s;
  }
  const RealVector fh = es.cwiseProduct(f);
  Eigen::JacobiSVD<RealMatrix> svd(eh, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double tol = std::max(eh.rows(), eh.cols()) * std::numeric_limits<double>::epsilon() *
                     (sv.size() ? sv(0) : 0.0) * 100.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  const RealMatrix u = svd.matrixU().leftCols(rank);
  s.a = svd.matrixV().leftCols(rank).transpose();
  s.b = sv.head(rank).cwiseInverse().asDiagonal() * (u.transpose() * fh);
  const RealVector consistent = fh - u * (u.transpose() * fh);
  s.inconsistent = inf_norm(consistent) > 1e-9 * std::max(1.0, inf_norm(fh));
  return s;
}

class KktSystem {
 public:
  KktSystem(const RealMatrix& p, const RealMatrix& a) : p_(p), a_(a) {}

  void factor(double penalty) {
    const Eigen::Index n = p_.rows();
    const Eigen::Index r = a_.rows();
    RealMatrix k = RealMatrix::Zero(n + r, n + r);
    k.topLeftCorner(n, n) = p_;
    k.topLeftCorner(n, n).diagonal().array() += kProximal + penalty;
    k.topRightCorner(n, r) = a_.transpose();
    k.bottomLeftCorner(r, n) = a_;
    lu_.compute(k);
  }

  RealVector solve(const RealVector& rhs) const { return lu_.solve(rhs); }

 private:
  const RealMatrix& p_;
  const RealMatrix& a_;
  Eigen::PartialPivLU<RealMatrix> lu_;
};

void project_cone(const Layout& lay, RealVector& z) {
  if (lay.nx > 0) {
    const ComplexMatrix x = lay.svec.unpack(z.head(lay.nx));
    const HermitianMatrix proj = linalg::project_psd(HermitianMatrix::symmetrized(x));
    lay.svec.pack(proj.matrix(), z.head(lay.nx));
  }
  for (Eigen::Index m = 0; m < lay.ngamma; ++m) {
    z(lay.gamma_begin() + m) = std::max(0.0, z(lay.gamma_begin() + m));
  }
}

struct Iterate {
  RealVector y;
  RealVector nu;
  double primal = std::numeric_limits<double>::infinity();
  double dual = std::numeric_limits<double>::infinity();
  double merit = std::numeric_limits<double>::infinity();
  int iteration = 0;
};

// ----------------------------------------------------------------------------
// Interior-point refinement. ADMM resolves directions of tiny curvature very
// slowly: the radar fit is blind to most of X and the power terms weigh orders
// of magnitude less. When it stalls, a primal-dual path-following method
// (Mehrotra predictor-corrector, AHO direction XS + SX = 2 mu I) finishes the
// job on the same equilibrated problem. Dimensions are small enough for a
// dense LU of the full Newton system.

struct InteriorPointResult {
  RealVector z;  // scaled variables
  RealVector nu;
  RealVector s;  // cone multipliers for [svec(X) | gamma]
  double stationarity = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

class InteriorPoint {
 public:
  InteriorPoint(const Layout& lay, const ScaledProblem& sp) : lay_(lay), sp_(sp) {}

  // `accept(z, nu, s)` returns true once the point meets the caller's tolerances.
  template <typename Accept>
  InteriorPointResult run(int max_iters, Accept&& accept) const {
    const Eigen::Index n = lay_.size();
    const Eigen::Index r = sp_.a.rows();
    const Eigen::Index nx = lay_.nx;
    const Eigen::Index ng = lay_.ngamma;
    const Eigen::Index nc = nx + ng;
    const Eigen::Index dim = lay_.svec.size() > 0 ? static_cast<Eigen::Index>(std::sqrt(nx)) : 0;
    const double cone_degree = static_cast<double>(dim + ng);

    // Start from scaled identities sized to the data.
    const RealVector least_norm = r ? RealVector(sp_.a.transpose() * sp_.b) : RealVector::Zero(n);
    const double xi = std::max(1.0, 10.0 * inf_norm(least_norm));
    const double eta = std::max(1.0, inf_norm(sp_.q));
    RealVector z = RealVector::Zero(n);
    RealVector s = RealVector::Zero(nc);
    RealVector nu = RealVector::Zero(r);
    {
      const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
      lay_.svec.pack(eye * xi, z.head(nx));
      lay_.svec.pack(eye * eta, s.head(nx));
      z.segment(nx, ng).setConstant(xi);
      s.tail(ng).setConstant(eta);
    }

    InteriorPointResult best;
    best.z = z;
    best.nu = nu;
    best.s = s;
    RealMatrix k(n + r + nc, n + r + nc);
    for (int it = 1; it <= max_iters; ++it) {
      const ComplexMatrix x = lay_.svec.unpack(z.head(nx));
      const ComplexMatrix sm = lay_.svec.unpack(s.head(nx));
      const RealVector gam = z.segment(nx, ng);
      const RealVector sg = s.tail(ng);

      RealVector rd = sp_.p * z + sp_.q;
      if (r) rd += sp_.a.transpose() * nu;
      rd.head(nc) -= s;
      const RealVector rp = r ? RealVector(sp_.a * z - sp_.b) : RealVector::Zero(0);
      const double mu =
          ((x.adjoint() * sm).trace().real() + gam.dot(sg)) / std::max(cone_degree, 1.0);

      InteriorPointResult cur{z, nu, s, inf_norm(sp_.d.cwiseInverse().cwiseProduct(rd)),
                              mu * cone_degree, it};
      if (cur.stationarity + cur.gap < best.stationarity + best.gap || it == 1) best = cur;
      if (accept(z, nu, s)) {
        best = cur;
        break;
      }

      // Newton matrix for (dz, dnu, ds).
      k.setZero();
      k.topLeftCorner(n, n) = sp_.p;
      if (r) {
        k.block(0, n, n, r) = sp_.a.transpose();
        k.block(n, 0, r, n) = sp_.a;
      }
      for (Eigen::Index i = 0; i < nc; ++i) k(i, n + r + i) = -1.0;
      RealVector unit = RealVector::Zero(nx);
      RealVector col(nx);
      for (Eigen::Index j = 0; j < nx; ++j) {
        unit(j) = 1.0;
        const ComplexMatrix b = lay_.svec.unpack(unit);
        unit(j) = 0.0;
        lay_.svec.pack(ComplexMatrix(b * sm + sm * b), col);
        k.block(n + r, j, nx, 1) = col;
        lay_.svec.pack(ComplexMatrix(x * b + b * x), col);
        k.block(n + r, n + r + j, nx, 1) = col;
      }
      for (Eigen::Index i = 0; i < ng; ++i) {
        k(n + r + nx + i, nx + i) = sg(i);
        k(n + r + nx + i, n + r + nx + i) = gam(i);
      }
      const Eigen::PartialPivLU<RealMatrix> lu(k);

      const ComplexMatrix xs = x * sm + sm * x;
      auto rhs_for = [&](double target, const ComplexMatrix& corr_x, const RealVector& corr_g) {
        RealVector rhs(n + r + nc);
        rhs.head(n) = -rd;
        rhs.segment(n, r) = -rp;
        ComplexMatrix c = -xs - corr_x;
        c.diagonal().array() += 2.0 * target;
        lay_.svec.pack(c, rhs.segment(n + r, nx));
        rhs.tail(ng) = (RealVector::Constant(ng, target) - gam.cwiseProduct(sg) - corr_g);
        return rhs;
      };
      auto step_limit = [&](const RealVector& dir) {
        const ComplexMatrix dz = lay_.svec.unpack(dir.segment(0, nx));
        const ComplexMatrix ds = lay_.svec.unpack(dir.segment(n + r, nx));
        double a = std::min(max_step(x, dz), max_step(sm, ds));
        for (Eigen::Index i = 0; i < ng; ++i) {
          if (dir(nx + i) < 0.0) a = std::min(a, -gam(i) / dir(nx + i));
          if (dir(n + r + nx + i) < 0.0) a = std::min(a, -sg(i) / dir(n + r + nx + i));
        }
        return a;
      };

      const ComplexMatrix zero_x = ComplexMatrix::Zero(dim, dim);
      const RealVector zero_g = RealVector::Zero(ng);
      const RealVector aff = lu.solve(rhs_for(0.0, zero_x, zero_g));
      if (!aff.allFinite()) break;
      const double a_aff = std::min(1.0, step_limit(aff));
      const ComplexMatrix dxa = lay_.svec.unpack(aff.segment(0, nx));
      const ComplexMatrix dsa = lay_.svec.unpack(aff.segment(n + r, nx));
      const RealVector dga = aff.segment(nx, ng);
      const RealVector dsga = aff.tail(ng);
      const double mu_aff = (((x + a_aff * dxa).adjoint() * (sm + a_aff * dsa)).trace().real() +
                             (gam + a_aff * dga).dot(sg + a_aff * dsga)) /
                            std::max(cone_degree, 1.0);
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      const RealVector dir = lu.solve(rhs_for(sigma * mu, ComplexMatrix(dxa * dsa + dsa * dxa),
                                              dga.cwiseProduct(dsga)));
      if (!dir.allFinite()) break;
      const double a = std::min(1.0, 0.98 * step_limit(dir));
      z += a * dir.head(n);
      nu += a * dir.segment(n, r);
      s += a * dir.tail(nc);
    }
    return best;
  }

 private:
  // Largest t with M + t D PSD (M positive definite); infinity if unbounded.
  static double max_step(const ComplexMatrix& m, const ComplexMatrix& d) {
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    const Eigen::LLT<ComplexMatrix> llt(m);
    if (llt.info() != Eigen::Success) return 0.0;
    const ComplexMatrix l_inv_d = llt.matrixL().solve(d);
    const ComplexMatrix w = llt.matrixL().solve(ComplexMatrix(l_inv_d.adjoint()));
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        ComplexMatrix(0.5 * (w + w.adjoint())), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    return lo < 0.0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
  }

  const Layout& lay_;
  const ScaledProblem& sp_;
};

}  // namespace

double AffineFunctional::evaluate(const HermitianMatrix& x, const RealVector& gamma,
                                  double alpha) const {
  if (x.dim() != matrix_coefficient.dim()) throw DimensionError("AffineFunctional: dim mismatch");
  double v = (matrix_coefficient.matrix().conjugate().cwiseProduct(x.matrix())).sum().real();
  for (Eigen::Index m = 0; m < gamma_coefficients.size(); ++m) v += gamma_coefficients(m) * gamma(m);
  return v + alpha_coefficient * alpha + offset;
}

void LsSdpProblem::validate() const {
  if (dim < 1) throw Error("LsSdpProblem: dim must be >= 1");
  if (gamma_len < 0) throw Error("LsSdpProblem: negative gamma_len");
  if (residuals.empty() && !linear_cost) {
    throw Error("LsSdpProblem: needs at least one residual or a linear cost");
  }
  auto check = [&](const AffineFunctional& f) {
    if (f.matrix_coefficient.dim() != dim) throw DimensionError("LsSdpProblem: coefficient dim");
    if (f.gamma_coefficients.size() != 0 && f.gamma_coefficients.size() != gamma_len) {
      throw DimensionError("LsSdpProblem: gamma coefficient length");
    }
    if (!has_alpha && f.alpha_coefficient != 0.0) {
      throw Error("LsSdpProblem: alpha coefficient without alpha variable");
    }
  };
  for (const auto& r : residuals) {
    if (!(r.weight >= 0.0) || !std::isfinite(r.weight)) {
      throw Error("LsSdpProblem: residual weights must be finite and nonnegative");
    }
    check(r.functional);
  }
  for (const auto& e : equalities) check(e);
  if (linear_cost) check(*linear_cost);
}

double LsSdpProblem::objective(const HermitianMatrix& x, const RealVector& gamma,
                               double alpha) const {
  double v = 0.0;
  for (const auto& r : residuals) {
    if (r.weight == 0.0) continue;
    const double f = r.functional.evaluate(x, gamma, alpha);
    v += r.weight * f * f;
  }
  if (linear_cost) v += linear_cost->evaluate(x, gamma, alpha);
  return v;
}

void SolverSettings::validate() const {
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0) || !(penalty > 0.0) || !(over_relaxation > 0.0) ||
      over_relaxation >= 2.0) {
    throw Error("SolverSettings: tolerances and penalty must be positive, relaxation in (0, 2)");
  }
  if (max_iters < 1) throw Error("SolverSettings: max_iters must be >= 1");
}

std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::max_iters: return "max_iters";
    case SolverStatus::infeasible_suspected: return "infeasible_suspected";
  }
  return "unknown";
}

SolveResult solve(const LsSdpProblem& problem, const SolverSettings& settings,
                  const std::optional<WarmStart>& warm_start) {
  problem.validate();
  settings.validate();

  Layout lay{Svec(problem.dim), problem.dim * problem.dim, problem.gamma_len, problem.has_alpha};

  const Eigen::Index n = lay.size();

  // Quadratic model 1/2 z'Pz + q'z (+ const) of the weighted residual sum.
  RealMatrix c = RealMatrix::Zero(static_cast<Eigen::Index>(problem.residuals.size()), n);
  RealVector cb = RealVector::Zero(c.rows());
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    const auto& r = problem.residuals[static_cast<std::size_t>(k)];
    if (r.weight == 0.0) continue;
    const double sw = std::sqrt(r.weight);
    c.row(k) = sw * functional_row(lay, r.functional).transpose();
    cb(k) = sw * r.functional.offset;
  }
  const RealMatrix p = 2.0 * (c.transpose() * c);
  RealVector q = 2.0 * (c.transpose() * cb);
  if (problem.linear_cost) q += functional_row(lay, *problem.linear_cost);

  const auto m_eq = static_cast<Eigen::Index>(problem.equalities.size());
  RealMatrix e(m_eq, n);
  RealVector f(m_eq);
  for (Eigen::Index i = 0; i < m_eq; ++i) {
    const auto& eq = problem.equalities[static_cast<std::size_t>(i)];
    e.row(i) = functional_row(lay, eq).transpose();
    f(i) = -eq.offset;
  }

  const ScaledProblem sp = equilibrate(lay, p, q, e, f);

  auto unscale = [&](const RealVector& zh) -> SolveResult {
    SolveResult res;
    const RealVector z = sp.d.cwiseProduct(zh);
    res.x = HermitianMatrix::symmetrized(lay.svec.unpack(z.head(lay.nx)));
    res.gamma = z.segment(lay.gamma_begin(), lay.ngamma);
    res.alpha = lay.has_alpha ? z(lay.alpha_index()) : 0.0;
    res.report.objective_value = problem.objective(res.x, res.gamma, res.alpha);
    return res;
  };

  if (sp.inconsistent) {
    SolveResult res = unscale(RealVector::Zero(n));
    res.report.status = SolverStatus::infeasible_suspected;
    res.report.primal_residual = inf_norm(f);
    return res;
  }

  const Eigen::Index r = sp.a.rows();
  const RealVector d_inv = sp.d.cwiseInverse();

  // Convergence measures shared by both stages. `mult` is the cone multiplier
  // in scaled units, laid out like z.
  struct Measures {
    double primal, dual, eps_primal, eps_dual;
    bool ok() const { return primal <= eps_primal && dual <= eps_dual; }
    double merit() const { return std::max(primal / eps_primal, dual / eps_dual); }
  };
  auto measure = [&](const RealVector& zx, const RealVector& zy, const RealVector& mult,
                     const RealVector& multipliers) {
    const RealVector gap = sp.d.cwiseProduct(zx - zy);
    const RealVector orig = sp.d.cwiseProduct(zy);
    const RealVector eq_violation = m_eq ? RealVector(e * orig - f) : RealVector::Zero(0);
    const double primal_scale =
        std::max({inf_norm(sp.d.cwiseProduct(zx)), inf_norm(orig), inf_norm(f)});
    const RealVector pz = sp.p * zx;
    const RealVector atnu = r ? RealVector(sp.a.transpose() * multipliers) : RealVector::Zero(n);
    const double dual_scale =
        std::max({inf_norm(d_inv.cwiseProduct(pz)), inf_norm(d_inv.cwiseProduct(sp.q)),
                  inf_norm(d_inv.cwiseProduct(atnu)), inf_norm(d_inv.cwiseProduct(mult))});
    return Measures{std::max(inf_norm(gap), inf_norm(eq_violation)),
                    inf_norm(d_inv.cwiseProduct(pz + sp.q + atnu + mult)),
                    settings.eps_abs + settings.eps_rel * primal_scale,
                    settings.eps_abs + settings.eps_rel * dual_scale};
  };

  KktSystem kkt(sp.p, sp.a);
  double penalty = std::clamp(settings.penalty, kPenaltyMin, kPenaltyMax);
  kkt.factor(penalty);

  RealVector x = RealVector::Zero(n);
  if (warm_start) {
    if (warm_start->x.dim() != problem.dim || warm_start->gamma.size() != problem.gamma_len) {
      throw DimensionError("solve: warm start does not match the problem");
    }
    RealVector z0 = RealVector::Zero(n);
    lay.svec.pack(warm_start->x.matrix(), z0.head(lay.nx));
    z0.segment(lay.gamma_begin(), lay.ngamma) = warm_start->gamma;
    if (lay.has_alpha) z0(lay.alpha_index()) = warm_start->alpha;
    x = d_inv.cwiseProduct(z0);
  }
  RealVector y = x;
  RealVector u = RealVector::Zero(n);
  RealVector nu = RealVector::Zero(r);
  RealVector rhs(n + r);
  const double relax = settings.over_relaxation;

  Iterate best;
  double window_merit = std::numeric_limits<double>::infinity();
  int iter = 0;
  int admm_iters = 0;
  SolverStatus status = SolverStatus::max_iters;

  for (iter = 1; iter <= settings.max_iters; ++iter) {
    rhs.head(n) = kProximal * x + penalty * (y - u) - sp.q;
    rhs.tail(r) = sp.b;
    const RealVector sol = kkt.solve(rhs);
    x = sol.head(n);
    nu = sol.tail(r);

    const RealVector x_relaxed = relax * x + (1.0 - relax) * y;
    RealVector y_next = x_relaxed + u;
    project_cone(lay, y_next);
    u += x_relaxed - y_next;
    y = std::move(y_next);
    admm_iters = iter;

    const bool check = iter % kCheckInterval == 0 || iter == settings.max_iters;
    if (!check) continue;

    // Stationarity is taken at x with the cone multiplier penalty * u.
    const Measures ms = measure(x, y, RealVector(penalty * u), nu);
    if (ms.merit() < best.merit) best = Iterate{y, nu, ms.primal, ms.dual, ms.merit(), iter};
    if (ms.ok()) {
      status = SolverStatus::optimal;
      break;
    }
    if (iter % kStallWindow == 0) {
      // Less than a factor 2 gained over a whole window: hand over.
      if (best.merit > 0.5 * window_merit) break;
      window_merit = best.merit;
    }

    if (settings.adaptive_penalty && iter % kAdaptInterval == 0) {
      const double primal_ratio = ms.primal / std::max(ms.eps_primal, 1e-300);
      const double dual_ratio = ms.dual / std::max(ms.eps_dual, 1e-300);
      double next = penalty;
      if (primal_ratio > kBalanceRatio * dual_ratio) {
        next = std::min(penalty * kPenaltyFactor, kPenaltyMax);
      } else if (dual_ratio > kBalanceRatio * primal_ratio) {
        next = std::max(penalty / kPenaltyFactor, kPenaltyMin);
      }
      if (next != penalty) {
        u *= penalty / next;
        penalty = next;
        kkt.factor(penalty);
      }
    }
  }

  // Both stages draw from the same max_iters budget.
  const int ip_budget = std::min(kInteriorPointIters, settings.max_iters - admm_iters);
  if (status != SolverStatus::optimal && ip_budget > 0) {
    const InteriorPoint ipm(lay, sp);
    Measures last{};
    auto accept = [&](const RealVector& z, const RealVector& mult_nu, const RealVector& s) {
      RealVector mult = RealVector::Zero(n);
      mult.head(s.size()) = -s;
      last = measure(z, z, mult, mult_nu);
      const ComplexMatrix xm = lay.svec.unpack(z.head(lay.nx));
      const ComplexMatrix sm = lay.svec.unpack(s.head(lay.nx));
      const double gap = (xm.adjoint() * sm).trace().real() +
                         z.segment(lay.gamma_begin(), lay.ngamma).dot(s.tail(lay.ngamma));
      last.dual = std::max(last.dual, gap);
      return last.ok();
    };
    const InteriorPointResult ip = ipm.run(ip_budget, accept);
    accept(ip.z, ip.nu, ip.s);
    if (last.ok() || last.merit() < best.merit) {
      SolveResult res = unscale(ip.z);
      res.report.status = last.ok() ? SolverStatus::optimal : SolverStatus::max_iters;
      res.report.iterations = admm_iters + ip.iterations;
      res.report.primal_residual = last.primal;
      res.report.dual_residual = last.dual;
      return res;
    }
  }

  // A converged check has merit <= 1 while every earlier check had merit > 1,
  // so `best` is the final iterate in that case.
  SolveResult res = unscale(best.y);
  res.report.status = status;
  res.report.iterations = admm_iters;
  res.report.primal_residual = best.primal;
  res.report.dual_residual = best.dual;
  return res;
}

// ----------------------------------------------------------------------------
// Problem builders

namespace {

AffineFunctional zero_functional(Eigen::Index n, Eigen::Index ngamma) {
  AffineFunctional f;
  f.matrix_coefficient = HermitianMatrix::zero(n);
  if (ngamma > 0) f.gamma_coefficients = RealVector::Zero(ngamma);
  return f;
}

void add_weighted_terms(LsSdpProblem& prob, const Scenario& s, double rho,
                        const RealVector& targets) {
  const Eigen::Index n = s.antennas();
  const Eigen::Index grid = s.grid_size();
  const Eigen::Index users = s.users();
  if (targets.size() != users) throw DimensionError("problem builder: one target per user");
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error("problem builder: rho must lie in [0, 1]");

  // alpha d_l - a_l^H R a_l
  const double w_radar = (1.0 - rho) / static_cast<double>(grid);
  for (Eigen::Index l = 0; l < grid; ++l) {
    const ComplexVector a = s.steering.col(l);
    AffineFunctional f = zero_functional(n, prob.gamma_len);
    f.matrix_coefficient = HermitianMatrix::symmetrized(-(a * a.adjoint()));
    f.alpha_coefficient = s.desired(l);
    prob.residuals.push_back({w_radar, std::move(f)});
  }
  // P*_m - zeta g_m R g_m^H, with g R g^H = <g^H g, R>
  const double w_wpt = rho / static_cast<double>(users);
  const double zeta = s.config.efficiency;
  for (Eigen::Index m = 0; m < users; ++m) {
    const ComplexVector gh = s.channels.row(m).adjoint();
    AffineFunctional f = zero_functional(n, prob.gamma_len);
    f.matrix_coefficient = HermitianMatrix::symmetrized(-zeta * (gh * gh.adjoint()));
    f.offset = targets(m);
    prob.residuals.push_back({w_wpt, std::move(f)});
  }
}

void add_diagonal_constraints(LsSdpProblem& prob, const Scenario& s) {
  const Eigen::Index n = s.antennas();
  for (Eigen::Index i = 0; i < n; ++i) {
    AffineFunctional e = zero_functional(n, prob.gamma_len);
    ComplexMatrix unit = ComplexMatrix::Zero(n, n);
    unit(i, i) = 1.0;
    e.matrix_coefficient = HermitianMatrix::symmetrized(unit);
    e.offset = -s.per_antenna_power();
    prob.equalities.push_back(std::move(e));
  }
}

}  // namespace

LsSdpProblem build_relaxed_problem(const Scenario& scenario, double rho, const RealVector& targets) {
  LsSdpProblem prob;
  prob.dim = scenario.antennas();
  prob.gamma_len = 0;
  prob.has_alpha = true;
  add_weighted_terms(prob, scenario, rho, targets);
  add_diagonal_constraints(prob, scenario);
  return prob;
}

LsSdpProblem build_suboptimal_problem(const Scenario& scenario, double rho,
                                      const RealVector& targets) {
  const ComplexMatrix& g = scenario.channels;
  const Eigen::Index users = g.rows();
  const Eigen::Index n = g.cols();
  Eigen::JacobiSVD<ComplexMatrix> svd(g);
  const RealVector& sv = svd.singularValues();
  if (sv.size() < users || sv(users - 1) <= 1e-12 * std::max(sv(0), 1e-300)) {
    throw Error("build_suboptimal_problem: channel matrix G is not full row rank");
  }

  LsSdpProblem prob;
  prob.dim = n;
  prob.gamma_len = users;
  prob.has_alpha = true;
  add_weighted_terms(prob, scenario, rho, targets);
  add_diagonal_constraints(prob, scenario);

  // g_p R g_q^H = tr(B R) with B = g_q^H g_p.
  //   Re tr(BR) = <(B + B^H)/2, R>,  Im tr(BR) = <j (B^H - B)/2, R>
  const ComplexMatrix gram = g * g.adjoint();
  for (Eigen::Index pi = 0; pi < users; ++pi) {
    for (Eigen::Index qi = pi; qi < users; ++qi) {
      const ComplexMatrix b = g.row(qi).adjoint() * g.row(pi);
      RealVector re_coef(users);
      RealVector im_coef(users);
      for (Eigen::Index m = 0; m < users; ++m) {
        const cplx k = gram(pi, m) * gram(m, qi);
        re_coef(m) = -k.real();
        im_coef(m) = -k.imag();
      }
      AffineFunctional re;
      re.matrix_coefficient = HermitianMatrix::symmetrized((b + b.adjoint()) * 0.5);
      re.gamma_coefficients = re_coef;
      prob.equalities.push_back(std::move(re));
      if (qi == pi) continue;
      AffineFunctional im;
      im.matrix_coefficient = HermitianMatrix::symmetrized(cplx(0.0, 0.5) * (b.adjoint() - b));
      im.gamma_coefficients = im_coef;
      prob.equalities.push_back(std::move(im));
    }
  }
  return prob;
}

LsSdpProblem build_power_max_problem(const Scenario& scenario) {
  LsSdpProblem prob;
  prob.dim = scenario.antennas();
  prob.has_alpha = false;
  const ComplexMatrix& g = scenario.channels;
  AffineFunctional cost = zero_functional(prob.dim, 0);
  cost.matrix_coefficient =
      HermitianMatrix::symmetrized(-scenario.config.efficiency * (g.adjoint() * g));
  prob.linear_cost = std::move(cost);
  add_diagonal_constraints(prob, scenario);
  return prob;
}

}  // namespace iswpt
