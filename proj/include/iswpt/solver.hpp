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
// Least-squares semidefinite programs
//
//   minimize    sum_k w_k f_k(X, gamma, alpha)^2 + c(X, gamma, alpha)
//   subject to  e_i(X, gamma, alpha) = 0,  X Hermitian PSD,  gamma >= 0
//
// where every f_k, e_i and c is affine and the matrix part pairs with X via
// <A, X> = Re tr(A^H X). Solved by ADMM with the equalities kept inside a
// fixed KKT system and the cone handled by projection, with an interior-point
// fallback for the slow tail.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "iswpt/linalg.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt {

struct AffineFunctional {
  HermitianMatrix matrix_coefficient;
  RealVector gamma_coefficients;  // empty means all zero
  double alpha_coefficient = 0.0;
  double offset = 0.0;

  double evaluate(const HermitianMatrix& x, const RealVector& gamma, double alpha) const;
};

struct WeightedResidual {
  double weight = 1.0;
  AffineFunctional functional;
};

struct LsSdpProblem {
  Eigen::Index dim = 0;
  Eigen::Index gamma_len = 0;
  bool has_alpha = false;
  std::vector<WeightedResidual> residuals;
  std::vector<AffineFunctional> equalities;
  std::optional<AffineFunctional> linear_cost;

  void validate() const;
  double objective(const HermitianMatrix& x, const RealVector& gamma, double alpha) const;
};

struct SolverSettings {
  double eps_abs = 1e-8;
  double eps_rel = 1e-6;
  int max_iters = 50000;
  double penalty = 1.0;
  bool adaptive_penalty = true;
  double over_relaxation = 1.6;

  void validate() const;
};

enum class SolverStatus { optimal, max_iters, infeasible_suspected };

std::string_view to_string(SolverStatus s);

// primal_residual is in the problem's own units (max of the consensus gap and
// the equality violation); dual_residual is the stationarity violation of the
// cost-normalized problem.
struct SolverReport {
  SolverStatus status = SolverStatus::max_iters;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective_value = 0.0;
};

struct SolveResult {
  HermitianMatrix x;
  RealVector gamma;
  double alpha = 0.0;
  SolverReport report;
};

/// Initial point for the splitting iterations; need not be feasible.
struct WarmStart {
  HermitianMatrix x;
  RealVector gamma;
  double alpha = 0.0;
};

/// ADMM; if it stalls short of the tolerances, a primal-dual interior-point
/// stage finishes from scratch on the same scaled problem and its iterations
/// are added to the count. Both stages share the max_iters budget.
SolveResult solve(const LsSdpProblem& problem, const SolverSettings& settings = {},
                  const std::optional<WarmStart>& warm_start = std::nullopt);

/// Relaxed weighted design: L radar residuals with weight (1 - rho)/L, M WPT
/// residuals with weight rho/M, per-antenna diagonal equalities, free alpha.
LsSdpProblem build_relaxed_problem(const Scenario& scenario, double rho, const RealVector& targets);

/// Relaxed problem plus the MRT-structure coupling
/// g_p R g_q^H = sum_m (GG^H)_pm gamma_m (GG^H)_mq, gamma_m = lambda_m^2 >= 0,
/// written as M^2 real equalities. Throws if G is rank deficient.
LsSdpProblem build_suboptimal_problem(const Scenario& scenario, double rho,
                                      const RealVector& targets);

/// Sum harvested power maximization under the per-antenna constraint, as a
/// negated linear cost.
LsSdpProblem build_power_max_problem(const Scenario& scenario);

}  // namespace iswpt
