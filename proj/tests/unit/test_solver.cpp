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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "iswpt/error.hpp"
#include "iswpt/metrics.hpp"
#include "iswpt/solver.hpp"
#include "support.hpp"

using namespace iswpt;
using Catch::Approx;

namespace {

HermitianMatrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return HermitianMatrix::symmetrized(m);
}

void add_diagonal(LsSdpProblem& p, const RealVector& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    p.equalities.push_back({unit(p.dim, i, i), {}, 0.0, -values(i)});
  }
}

void check_exit_contract(const SolveResult& r, const SolverSettings& s) {
  REQUIRE(r.report.status == SolverStatus::optimal);
  CHECK(r.report.primal_residual >= 0.0);
  CHECK(r.report.dual_residual >= 0.0);
  CHECK(r.report.primal_residual <= s.eps_abs + s.eps_rel);
  CHECK(r.report.dual_residual <= s.eps_abs + s.eps_rel);
  const ComplexMatrix& x = r.x.matrix();
  CHECK((x - x.adjoint()).norm() <= 1e-10);
  CHECK(linalg::min_eigenvalue(r.x) >= -s.eps_abs);
  for (Eigen::Index i = 0; i < r.gamma.size(); ++i) CHECK(r.gamma(i) >= -s.eps_abs);
}

}  // namespace

TEST_CASE("scalar least squares", "[solver]") {
  LsSdpProblem p;
  p.dim = 1;
  p.residuals.push_back({1.0, {HermitianMatrix::identity(1), {}, 0.0, -1.0}});
  const SolverSettings settings;
  const auto r = solve(p, settings);
  check_exit_contract(r, settings);
  CHECK(r.x(0, 0).real() == Approx(1.0).margin(1e-6));
  CHECK(r.report.objective_value == Approx(0.0).margin(1e-10));
}

TEST_CASE("phase-aligned maximization with fixed diagonal", "[solver]") {
  // Off-diagonals are bounded by 0.5 through PSD plus diag = 0.5, so the
  // maximizer of 1^T X 1 is the all-0.5 matrix with value 2.
  LsSdpProblem p;
  p.dim = 2;
  ComplexMatrix q = ComplexMatrix::Ones(2, 2);
  p.linear_cost = AffineFunctional{HermitianMatrix(-q), {}, 0.0, 0.0};
  add_diagonal(p, RealVector::Constant(2, 0.5));
  SolverSettings settings;
  settings.eps_abs = settings.eps_rel = 1e-10;
  const auto r = solve(p, settings);
  check_exit_contract(r, settings);
  CHECK((r.x.matrix() - ComplexMatrix::Constant(2, 2, 0.5)).norm() < 1e-6);
  CHECK(r.report.objective_value == Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("zero-loss point of a beampattern fit", "[solver]") {
  ScenarioConfig c;
  c.antennas = 4;
  c.users = 1;
  c.grid_step = 5.0;
  const auto s = build_scenario(c);
  std::mt19937_64 rng(31);
  const auto x0 = testing::random_psd(4, 2, rng);
  const RealVector d = beampattern(x0, s.steering);

  LsSdpProblem p;
  p.dim = 4;
  p.has_alpha = true;
  for (Eigen::Index l = 0; l < s.grid_size(); ++l) {
    const ComplexVector a = s.steering.col(l);
    p.residuals.push_back(
        {1.0 / s.grid_size(), {HermitianMatrix::symmetrized(-a * a.adjoint()), {}, d(l), 0.0}});
  }
  add_diagonal(p, x0.matrix().diagonal().real());
  CHECK(p.objective(x0, {}, 1.0) == Approx(0.0).margin(1e-24));

  const SolverSettings settings;
  const auto r = solve(p, settings);
  check_exit_contract(r, settings);
  CHECK(r.report.objective_value <= 1e-8 * d.squaredNorm());
}

TEST_CASE("build_relaxed_problem layout", "[solver]") {
  const auto s = build_scenario(ScenarioConfig{});
  const RealVector targets = RealVector::Constant(3, 1e-3);
  const auto p = build_relaxed_problem(s, 0.3, targets);
  CHECK(p.residuals.size() == 1801 + 3);
  CHECK(p.equalities.size() == 10);
  CHECK(p.has_alpha);
  CHECK(p.gamma_len == 0);
  CHECK(p.residuals.front().weight == Approx(0.7 / 1801));
  CHECK(p.residuals.back().weight == Approx(0.3 / 3));

  const auto radar = build_relaxed_problem(s, 0.0, targets);
  for (std::size_t m = 1801; m < radar.residuals.size(); ++m) CHECK(radar.residuals[m].weight == 0.0);
  const auto wpt = build_relaxed_problem(s, 1.0, targets);
  for (std::size_t l = 0; l < 1801; ++l) CHECK(wpt.residuals[l].weight == 0.0);

  // The problem objective agrees with the metrics module.
  std::mt19937_64 rng(32);
  const auto r = testing::random_psd(10, 3, rng);
  const auto report = objective(r, 0.3, s, targets);
  CHECK(p.objective(r, {}, report.alpha) == Approx(report.objective).epsilon(1e-12));
}

TEST_CASE("build_suboptimal_problem layout", "[solver]") {
  const auto s = build_scenario(ScenarioConfig{});
  const auto p = build_suboptimal_problem(s, 0.5, RealVector::Constant(3, 1e-3));
  CHECK(p.equalities.size() == 10 + 9);
  CHECK(p.gamma_len == 3);
  CHECK(p.residuals.size() == 1804);

  ScenarioConfig dup;
  dup.users = 2;
  dup.channels = ComplexMatrix::Ones(2, 10);
  CHECK_THROWS_AS(build_suboptimal_problem(build_scenario(dup), 0.5, RealVector::Ones(2)), Error);
}

TEST_CASE("single-user coupling fixes gamma", "[solver]") {
  // g = e_1: g R g^H = (g g^H) gamma (g g^H) reduces to R_11 = gamma.
  ScenarioConfig c;
  c.antennas = 2;
  c.users = 1;
  c.total_power = 1.0;
  c.grid_step = 10.0;
  c.channels = ComplexMatrix::Zero(1, 2);
  (*c.channels)(0, 0) = 1.0;
  const auto s = build_scenario(c);
  const auto p = build_suboptimal_problem(s, 0.5, RealVector::Constant(1, 0.25));
  REQUIRE(p.equalities.size() == 3);
  SolverSettings settings;
  settings.eps_abs = settings.eps_rel = 1e-10;
  const auto r = solve(p, settings);
  check_exit_contract(r, settings);
  REQUIRE(r.gamma.size() == 1);
  CHECK(r.gamma(0) == Approx(0.5).epsilon(1e-7));
}

TEST_CASE("solver matches a brute-force oracle on two antennas", "[solver][property]") {
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::mt19937_64 rng(33);
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const auto s = testing::random_two_antenna_scenario(seed);
    const double rho = weight(rng);
    const double target = testing::two_antenna_power_target(s);
    const auto r = solve(build_relaxed_problem(s, rho, RealVector::Constant(1, target)));
    REQUIRE(r.report.status == SolverStatus::optimal);
    const double oracle = testing::brute_force_two_antenna(s, rho, target, 201, 2000);
    CHECK(r.report.objective_value <= oracle * (1.0 + 1e-3));
    CHECK(r.report.objective_value >= oracle * (1.0 - 1e-3) - 1e-12);
  }
}

TEST_CASE("solving twice is bit-identical", "[solver][property]") {
  const auto s = testing::random_two_antenna_scenario(7);
  const auto p = build_relaxed_problem(s, 0.4, RealVector::Constant(1, 1e-3));
  const auto a = solve(p);
  const auto b = solve(p);
  CHECK(a.x.matrix() == b.x.matrix());
  CHECK(a.alpha == b.alpha);
  CHECK(a.report.iterations == b.report.iterations);
}

TEST_CASE("iteration cap and infeasible equalities", "[solver]") {
  const auto s = build_scenario(ScenarioConfig{});
  SolverSettings capped;
  capped.max_iters = 3;
  const auto r = solve(build_relaxed_problem(s, 0.5, RealVector::Constant(3, 1e-3)), capped);
  CHECK(r.report.status == SolverStatus::max_iters);
  CHECK(r.report.iterations <= 3);
  CHECK(r.x.dim() == 10);

  LsSdpProblem bad;
  bad.dim = 1;
  bad.residuals.push_back({1.0, {HermitianMatrix::identity(1), {}, 0.0, 0.0}});
  bad.equalities.push_back({HermitianMatrix::identity(1), {}, 0.0, -1.0});
  bad.equalities.push_back({HermitianMatrix::identity(1), {}, 0.0, -2.0});
  CHECK(solve(bad).report.status == SolverStatus::infeasible_suspected);
}

TEST_CASE("problem and settings validation", "[solver]") {
  LsSdpProblem empty;
  empty.dim = 2;
  CHECK_THROWS_AS(empty.validate(), Error);

  LsSdpProblem neg;
  neg.dim = 1;
  neg.residuals.push_back({-1.0, {HermitianMatrix::identity(1), {}, 0.0, 0.0}});
  CHECK_THROWS_AS(neg.validate(), Error);

  LsSdpProblem wrong_dim;
  wrong_dim.dim = 2;
  wrong_dim.residuals.push_back({1.0, {HermitianMatrix::identity(3), {}, 0.0, 0.0}});
  CHECK_THROWS(wrong_dim.validate());

  SolverSettings s;
  s.max_iters = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = {};
  s.eps_abs = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
}
