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
#include "iswpt/scenario.hpp"
#include "support.hpp"

using namespace iswpt;
using Catch::Approx;

namespace {

Scenario small_scenario() {
  ScenarioConfig c;
  c.grid_step = 1.0;
  return build_scenario(c);
}

HermitianMatrix feasible_psd(Eigen::Index n, double per_antenna, std::mt19937_64& rng) {
  const ComplexMatrix b = testing::random_complex(n, 1 + static_cast<Eigen::Index>(rng() % n), rng);
  ComplexMatrix r = b * b.adjoint();
  const RealVector s = (per_antenna / r.diagonal().real().array()).sqrt();
  r = s.asDiagonal() * r * s.asDiagonal();
  return HermitianMatrix::symmetrized(r);
}

}  // namespace

TEST_CASE("beampattern", "[metrics]") {
  const auto s = small_scenario();
  const double pt = s.config.total_power;
  const auto iso = beampattern(HermitianMatrix::identity(10) * (pt / 10.0), s.steering);
  CHECK((iso.array() - pt).abs().maxCoeff() < 1e-12);

  const ComplexVector a0 = steering_vector(0.0, 10, 0.5);
  const auto focused = HermitianMatrix::symmetrized(a0 * a0.adjoint() / 10.0);
  CHECK(beampattern(focused, a0)(0) == Approx(10.0));

  CHECK(beampattern(HermitianMatrix::zero(10), s.steering).isZero());
  CHECK_THROWS_AS(beampattern(HermitianMatrix::identity(3), s.steering), DimensionError);
}

TEST_CASE("beampattern is linear in R", "[metrics][property]") {
  const auto s = small_scenario();
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r1 = testing::random_hermitian(10, rng);
    const auto r2 = testing::random_hermitian(10, rng);
    const RealVector lhs = beampattern(r1 + r2, s.steering);
    const RealVector rhs = beampattern(r1, s.steering) + beampattern(r2, s.steering);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("optimal_alpha", "[metrics]") {
  CHECK(optimal_alpha(RealVector::Constant(5, 0.7), RealVector::Ones(5)) == Approx(0.7));
  CHECK(optimal_alpha(RealVector{{4.0, 7.0}}, RealVector{{1.0, 0.0}}) == Approx(4.0));

  const RealVector d{{0.0, 1.0, 1.0, 0.5}};
  const RealVector p = 2.5 * d;
  CHECK(optimal_alpha(p, d) == 2.5);
  CHECK(radar_loss(p, d, AlphaMode::joint()).loss == Approx(0.0).margin(1e-15));

  CHECK_THROWS_AS(optimal_alpha(RealVector::Ones(3), RealVector::Zero(3)), Error);
  CHECK_THROWS_AS(optimal_alpha(RealVector::Ones(3), RealVector::Ones(2)), DimensionError);
}

TEST_CASE("radar_loss", "[metrics]") {
  const auto s = build_scenario([] {
    ScenarioConfig c;
    c.grid_step = 1.0;
    c.mainlobe_centers = {0.0};
    c.mainlobe_halfwidth = 90.0;  // flat desired pattern
    return c;
  }());
  const auto iso = HermitianMatrix::identity(10) * 0.1;
  const auto joint = radar_loss(iso, s);
  CHECK(joint.loss == Approx(0.0).margin(1e-24));
  CHECK(joint.alpha == Approx(1.0));

  const auto two = radar_loss(RealVector{{1.0, 1.0}}, RealVector{{1.0, 0.0}}, AlphaMode::joint());
  CHECK(two.alpha == Approx(1.0));
  CHECK(two.loss == Approx(0.5));

  const RealVector p{{0.3, -0.2, 1.5}};
  const auto zero = radar_loss(p, RealVector::Ones(3), AlphaMode::fixed(0.0));
  CHECK(zero.loss == Approx(p.squaredNorm() / 3.0));
  CHECK(zero.alpha == 0.0);
}

TEST_CASE("joint alpha is never worse than a fixed alpha", "[metrics][property]") {
  const auto s = small_scenario();
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> alpha(-2.0, 4.0);
  const auto r = feasible_psd(10, s.per_antenna_power(), rng);
  const RealVector p = beampattern(r, s.steering);
  CHECK(p.mean() == Approx(p.sum() / static_cast<double>(p.size())));
  const double joint = radar_loss(r, s).loss;
  for (int trial = 0; trial < 100; ++trial) {
    CHECK(joint <= radar_loss(r, s, AlphaMode::fixed(alpha(rng))).loss + 1e-15);
  }
}

TEST_CASE("harvested_power", "[metrics]") {
  const double pt = 1.0;
  ComplexVector e1 = ComplexVector::Zero(4);
  e1(0) = 1.0;
  CHECK(harvested_power(HermitianMatrix::identity(4) * (pt / 4), e1, 0.5) == Approx(0.5 * pt / 4));

  ComplexVector g(3);
  g << cplx(0.6, 0.0), cplx(0.0, 0.8), 0.0;
  // The channel is a row; R = g^H g.
  const auto matched = HermitianMatrix::symmetrized(g.conjugate() * g.transpose());
  CHECK(harvested_power(matched, g, 1.0) == Approx(1.0));

  ComplexVector h = ComplexVector::Constant(2, std::pow(10.0, -1.5) / std::sqrt(2.0));
  const auto half = HermitianMatrix::symmetrized(ComplexMatrix::Constant(2, 2, 0.5));
  CHECK(harvested_power(half, h, 0.5) == Approx(5e-4));

  CHECK_THROWS_AS(harvested_power(half, e1, 0.5), DimensionError);
}

TEST_CASE("harvested power is nonnegative on PSD inputs", "[metrics][property]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 1 + trial % 10;
    const auto r = testing::random_psd(n, 1 + trial % n, rng);
    const ComplexVector g = testing::random_complex(n, 1, rng).col(0);
    CHECK(harvested_power(r, g, 0.5) >= -1e-12);
  }
}

TEST_CASE("wpt_loss", "[metrics]") {
  ComplexMatrix g = ComplexMatrix::Identity(2, 2);
  const auto r = HermitianMatrix::identity(2) * 0.5;
  const RealVector achieved = harvested_powers(r, g, 0.5);
  CHECK(wpt_loss(r, achieved, g, 0.5) == 0.0);

  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  CHECK(wpt_loss(HermitianMatrix::identity(1), RealVector{{2.0}}, one, 1.0) ==
        Approx(1.0));

  const RealVector targets = achieved + RealVector{{1e-3, -3e-3}};
  CHECK(wpt_loss(r, targets, g, 0.5) == Approx(5e-6));
  CHECK(wpt_loss(r, targets, g, 0.5, WptLossMode::normalized) ==
        Approx(0.5 * (std::pow(1e-3 / targets(0), 2) + std::pow(3e-3 / targets(1), 2))));

  CHECK_THROWS_AS(wpt_loss(r, RealVector::Ones(3), g, 0.5), DimensionError);
}

TEST_CASE("objective weights the two losses", "[metrics]") {
  const auto s = small_scenario();
  std::mt19937_64 rng(24);
  const auto r = feasible_psd(10, s.per_antenna_power(), rng);
  const RealVector targets = harvested_powers(r, s.channels, s.config.efficiency) * 1.3;
  const auto r0 = objective(r, 0.0, s, targets);
  const auto r1 = objective(r, 1.0, s, targets);
  const auto rh = objective(r, 0.5, s, targets);
  CHECK(r0.objective == r0.radar_loss);
  CHECK(r1.objective == r1.wpt_loss);
  CHECK(rh.objective == Approx(0.5 * rh.radar_loss + 0.5 * rh.wpt_loss));
  CHECK(rh.rho == 0.5);
  CHECK(rh.sum_power == Approx(rh.per_user_power.sum()));
  CHECK(rh.radar_loss >= 0.0);
  CHECK(rh.wpt_loss >= 0.0);
  CHECK_THROWS_AS(objective(r, 1.5, s, targets), Error);
}
