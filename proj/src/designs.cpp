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

#include "iswpt/designs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "iswpt/error.hpp"

namespace iswpt {

namespace {

void require_optimal(const SolverReport& rep, const char* what) {
  if (rep.status == SolverStatus::optimal) return;
  std::ostringstream msg;
  msg << what << ": solver finished with status " << to_string(rep.status) << " after "
      << rep.iterations << " iterations (primal " << rep.primal_residual << ", dual "
      << rep.dual_residual << ")";
  throw SolverError(msg.str());
}

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error("rho must lie in [0, 1]");
}

struct RecoveryResiduals {
  double covariance;
  double channel;
  double covariance_bound;
  double channel_bound;
  bool ok() const { return covariance <= covariance_bound && channel <= channel_bound; }
};

RecoveryResiduals recovery_residuals(const ComplexMatrix& w, const HermitianMatrix& r,
                                     const ComplexMatrix& g, const ComplexMatrix& h) {
  RecoveryResiduals res;
  res.covariance = (w * w.adjoint() - r.matrix()).norm();
  res.channel = (g * w - h).norm();
  res.covariance_bound = 1e-7 * r.norm();
  res.channel_bound = 1e-6 * std::max(1.0, h.norm());
  return res;
}

ComplexMatrix mrt_target(const ComplexMatrix& g, const RealVector& lambda) {
  const Eigen::Index users = g.rows();
  const Eigen::Index n = g.cols();
  ComplexMatrix h = ComplexMatrix::Zero(users, n);
  h.leftCols(users) = (g * g.adjoint()) * lambda.cast<cplx>().asDiagonal();
  return h;
}

ComplexMatrix mrt_recover_unchecked(const HermitianMatrix& r, const ComplexMatrix& g,
                                    const RealVector& lambda) {
  const ComplexMatrix d = linalg::psd_factor(r);
  // (GD)^H = Q T  =>  GD = T^H Q^H = [L, 0] U with U = Q^H
  const auto gd = linalg::qr_full((g * d).adjoint());
  const ComplexMatrix h = mrt_target(g, lambda);
  // H^H = Q_H T_H  =>  H = [L_H, 0] U_H with U_H = Q_H^H
  const auto hq = linalg::qr_full(h.adjoint());
  // W = D U^H U_H
  return d * gd.q * hq.q.adjoint();
}

DesignResult finish(Method method, HermitianMatrix r, BeamformerSet beams, double rho,
                    const Scenario& scenario, const WptTargets& targets, SolverReport report) {
  DesignResult out;
  out.method = method;
  out.metrics = objective(r, rho, scenario, targets.targets);
  out.r = std::move(r);
  out.beams = std::move(beams);
  out.solver_report = report;
  out.targets = targets.targets;
  return out;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::optimal: return "optimal";
    case Method::suboptimal: return "suboptimal";
    case Method::randomized: return "randomized";
    case Method::radar_only: return "radar-only";
    case Method::wpt_only: return "wpt-only";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::optimal, Method::suboptimal, Method::randomized, Method::radar_only,
                   Method::wpt_only}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

SolverSettings DesignOptions::precise_settings() {
  SolverSettings s;
  s.eps_abs = 1e-12;
  s.eps_rel = 1e-12;
  s.max_iters = 50000;
  return s;
}

WptTargets wpt_power_targets(const Scenario& scenario, const DesignOptions& options) {
  const auto sol = solve(build_power_max_problem(scenario), options.solver);
  require_optimal(sol.report, "wpt_power_targets");
  WptTargets out;
  out.r = sol.x;
  out.targets = harvested_powers(sol.x, scenario.channels, scenario.config.efficiency);
  out.solver_report = sol.report;
  return out;
}

RelaxedSolution solve_relaxed(const Scenario& scenario, double rho, const RealVector& targets,
                              const DesignOptions& options) {
  require_rho(rho);
  const auto sol = solve(build_relaxed_problem(scenario, rho, targets), options.solver);
  require_optimal(sol.report, "solve_relaxed");
  return {sol.x, sol.alpha, sol.report};
}

RelaxedSolution solve_relaxed(const Scenario& scenario, double rho, const WptTargets& targets,
                              const DesignOptions& options) {
  require_rho(rho);
  // The power maximizer meets every target exactly, so it is optimal at
  // rho = 1 and a feasible start elsewhere.
  const WarmStart start{targets.r, RealVector(), 0.0};
  const auto sol =
      solve(build_relaxed_problem(scenario, rho, targets.targets), options.solver, start);
  require_optimal(sol.report, "solve_relaxed");
  return {sol.x, sol.alpha, sol.report};
}

BeamformerSet rank1_reconstruct(const HermitianMatrix& r) {
  return BeamformerSet{linalg::hermitian_sqrt(r).matrix()};
}

BeamformerSet mrt_recover(const HermitianMatrix& r, const ComplexMatrix& channels,
                          const RealVector& lambda) {
  if (channels.cols() != r.dim() || lambda.size() != channels.rows()) {
    throw DimensionError("mrt_recover: shapes of R, G and lambda disagree");
  }
  const ComplexMatrix h = mrt_target(channels, lambda);
  ComplexMatrix w = mrt_recover_unchecked(r, channels, lambda);
  auto res = recovery_residuals(w, r, channels, h);
  if (res.ok()) return BeamformerSet{std::move(w)};

  // Near-zero lambda_m leaves G R G^H (numerically) singular and the two
  // triangular factors may disagree on its null space; retry once with a
  // slightly lifted power allocation.
  const double eps = 1e-10 * std::max(lambda.cwiseAbs2().maxCoeff(), 0.0);
  const RealVector lifted = (lambda.cwiseAbs2().array() + eps).sqrt().matrix();
  ComplexMatrix w2 = mrt_recover_unchecked(r, channels, lifted);
  auto res2 = recovery_residuals(w2, r, channels, h);
  if (res2.ok()) return BeamformerSet{std::move(w2)};

  std::ostringstream msg;
  msg << "mrt_recover: ||WW^H - R||_F = " << res2.covariance << " (bound "
      << res2.covariance_bound << "), ||GW - H||_F = " << res2.channel << " (bound "
      << res2.channel_bound << ")";
  throw RecoveryError(msg.str(), res2.covariance, res2.channel);
}

DesignResult optimal_design(const Scenario& scenario, const WptTargets& targets, double rho,
                            const DesignOptions& options) {
  auto relaxed = solve_relaxed(scenario, rho, targets, options);
  BeamformerSet beams = rank1_reconstruct(relaxed.r);
  return finish(Method::optimal, std::move(relaxed.r), std::move(beams), rho, scenario, targets,
                relaxed.solver_report);
}

DesignResult suboptimal_design(const Scenario& scenario, const WptTargets& targets, double rho,
                               const DesignOptions& options) {
  require_rho(rho);
  const auto sol =
      solve(build_suboptimal_problem(scenario, rho, targets.targets), options.solver);
  require_optimal(sol.report, "suboptimal_design");
  const RealVector lambda = sol.gamma.cwiseMax(0.0).cwiseSqrt();
  BeamformerSet beams = mrt_recover(sol.x, scenario.channels, lambda);
  DesignResult out =
      finish(Method::suboptimal, sol.x, std::move(beams), rho, scenario, targets, sol.report);
  out.lambda = lambda;
  return out;
}

std::optional<RealVector> diagonal_repair_scaling(const RealVector& diag, double per_antenna) {
  RealVector s(diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0)) return std::nullopt;
    s(i) = std::sqrt(per_antenna / diag(i));
  }
  return s;
}

DesignResult randomization_baseline(const Scenario& scenario, const WptTargets& targets,
                                    double rho, const DesignOptions& options) {
  if (options.randomization_samples < 1) throw Error("randomization_baseline: K must be >= 1");
  const auto relaxed = solve_relaxed(scenario, rho, targets, options);
  const ComplexMatrix root = linalg::hermitian_sqrt(relaxed.r).matrix();
  const Eigen::Index n = scenario.antennas();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  GaussianStream stream(options.randomization_seed);
  std::optional<DesignResult> best;
  for (int k = 0; k < options.randomization_samples; ++k) {
    ComplexMatrix xi(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) xi(i, j) = stream.standard_complex();
    }
    ComplexMatrix w = root * xi * inv_sqrt_n;
    const RealVector diag = (w * w.adjoint()).diagonal().real();
    const auto scale = diagonal_repair_scaling(diag, scenario.per_antenna_power());
    if (!scale) continue;
    w = scale->cast<cplx>().asDiagonal() * w;
    BeamformerSet beams{std::move(w)};
    HermitianMatrix r = beams.covariance();
    const MetricReport rep = objective(r, rho, scenario, targets.targets);
    if (!best || rep.objective < best->metrics.objective) {
      best = finish(Method::randomized, std::move(r), std::move(beams), rho, scenario, targets,
                    relaxed.solver_report);
    }
  }
  if (!best) throw Error("randomization_baseline: every candidate had a zero diagonal entry");
  return *best;
}

DesignResult radar_only(const Scenario& scenario, const WptTargets& targets,
                        const DesignOptions& options) {
  DesignResult out = optimal_design(scenario, targets, 0.0, options);
  out.method = Method::radar_only;
  return out;
}

DesignResult wpt_only(const Scenario& scenario, const WptTargets& targets,
                      const DesignOptions& options) {
  DesignResult out = optimal_design(scenario, targets, 1.0, options);
  out.method = Method::wpt_only;
  return out;
}

DesignResult run_design(Method method, const Scenario& scenario, const WptTargets& targets,
                        double rho, const DesignOptions& options) {
  switch (method) {
    case Method::optimal: return optimal_design(scenario, targets, rho, options);
    case Method::suboptimal: return suboptimal_design(scenario, targets, rho, options);
    case Method::randomized: return randomization_baseline(scenario, targets, rho, options);
    case Method::radar_only: return radar_only(scenario, targets, options);
    case Method::wpt_only: return wpt_only(scenario, targets, options);
  }
  throw Error("run_design: unknown method");
}

}  // namespace iswpt
