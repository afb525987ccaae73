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
// Beamforming designs trading radar beampattern matching against harvested
// power:
//
//  * optimal     - relaxed covariance SDP, then the exact rank-1 split
//                  W = R^{1/2} (columns w_i, sum_i w_i w_i^H = R);
//  * suboptimal  - covariance constrained to an MRT-plus-orthogonal beam
//                  structure, beams recovered as W = D U^H U_H;
//  * randomized  - Gaussian randomization from the relaxed optimum with a
//                  diagonal feasibility repair (baseline);
//  * radar_only / wpt_only - the rho = 0 / rho = 1 end points.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "iswpt/linalg.hpp"
#include "iswpt/metrics.hpp"
#include "iswpt/scenario.hpp"
#include "iswpt/solver.hpp"

namespace iswpt {

enum class Method { optimal, suboptimal, randomized, radar_only, wpt_only };

std::string_view to_string(Method m);
/// Accepts the CLI spellings: optimal, suboptimal, randomized, radar-only, wpt-only.
std::optional<Method> parse_method(std::string_view name);

/// Beamforming vectors as the columns of an N x N matrix.
struct BeamformerSet {
  ComplexMatrix w;

  HermitianMatrix covariance() const { return HermitianMatrix::symmetrized(w * w.adjoint()); }
};

struct DesignResult {
  Method method = Method::optimal;
  HermitianMatrix r;
  BeamformerSet beams;
  std::optional<RealVector> lambda;  // MRT power allocation, suboptimal only
  MetricReport metrics;
  SolverReport solver_report;
  RealVector targets;
};

struct WptTargets {
  RealVector targets;  // P*_m, W
  HermitianMatrix r;   // maximizer of the sum harvested power
  SolverReport solver_report;
};

struct RelaxedSolution {
  HermitianMatrix r;
  double alpha = 0.0;
  SolverReport solver_report;
};

struct DesignOptions {
  SolverSettings solver = precise_settings();
  int randomization_samples = 100;
  std::uint64_t randomization_seed = 1;

  /// Tolerances used by every design; tighter than the solver defaults so
  /// the weighted-sum trade-off curve is resolved.
  static SolverSettings precise_settings();
};

/// Throws SolverError unless the solver reports `optimal`.
WptTargets wpt_power_targets(const Scenario& scenario, const DesignOptions& options = {});

RelaxedSolution solve_relaxed(const Scenario& scenario, double rho, const RealVector& targets,
                              const DesignOptions& options = {});
/// Same problem, iterations started from the power-maximizing covariance.
RelaxedSolution solve_relaxed(const Scenario& scenario, double rho, const WptTargets& targets,
                              const DesignOptions& options = {});

/// W = U Lambda^{1/2} U^H; sum_i w_i w_i^H = R.
BeamformerSet rank1_reconstruct(const HermitianMatrix& r);

/// MRT-structured recovery: D = psd_factor(R), (GD)^H = Q T, H^H = Q_H T_H with
/// H = [G G^H Lambda, 0]; W = D Q Q_H^H. Throws RecoveryError if
/// ||WW^H - R||_F > 1e-7 ||R||_F or ||GW - H||_F > 1e-6 max(1, ||H||_F).
BeamformerSet mrt_recover(const HermitianMatrix& r, const ComplexMatrix& channels,
                          const RealVector& lambda);

DesignResult optimal_design(const Scenario& scenario, const WptTargets& targets, double rho,
                            const DesignOptions& options = {});
DesignResult suboptimal_design(const Scenario& scenario, const WptTargets& targets, double rho,
                               const DesignOptions& options = {});
DesignResult randomization_baseline(const Scenario& scenario, const WptTargets& targets,
                                    double rho, const DesignOptions& options = {});
DesignResult radar_only(const Scenario& scenario, const WptTargets& targets,
                        const DesignOptions& options = {});
DesignResult wpt_only(const Scenario& scenario, const WptTargets& targets,
                      const DesignOptions& options = {});

DesignResult run_design(Method method, const Scenario& scenario, const WptTargets& targets,
                        double rho, const DesignOptions& options = {});

/// Randomization repair: S = diag(sqrt(p / c_nn)) so that S C S has diagonal p.
/// Returns nullopt if some c_nn is not positive.
std::optional<RealVector> diagonal_repair_scaling(const RealVector& diag, double per_antenna);

}  // namespace iswpt
