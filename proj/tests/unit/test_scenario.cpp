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
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "iswpt/error.hpp"
#include "iswpt/scenario.hpp"

using namespace iswpt;
using Catch::Approx;

TEST_CASE("steering_vector", "[scenario]") {
  for (int n : {1, 4, 10}) {
    const auto a = steering_vector(0.0, n, 0.5);
    CHECK((a - ComplexVector::Ones(n)).norm() < 1e-15);
  }
  const auto a90 = steering_vector(90.0, 3, 0.5);
  CHECK(std::abs(a90(0) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(a90(1) - cplx(-1, 0)) < 1e-12);
  CHECK(std::abs(a90(2) - cplx(1, 0)) < 1e-12);

  const auto a30 = steering_vector(30.0, 2, 0.5);
  CHECK(std::abs(a30(0) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(a30(1) - cplx(0, 1)) < 1e-12);
}

TEST_CASE("steering vectors have unit-modulus entries and front/back symmetry", "[scenario][property]") {
  for (double theta = -90.0; theta <= 90.0; theta += 7.3) {
    const auto a = steering_vector(theta, 10, 0.5);
    CHECK(a(0) == cplx(1.0, 0.0));
    CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((a - steering_vector(180.0 - theta, 10, 0.5)).norm() < 1e-9);
  }
}

TEST_CASE("angle_grid sizes", "[scenario]") {
  CHECK(angle_grid(-90.0, 90.0, 0.1).size() == 1801);
  const auto coarse = angle_grid(-90.0, 90.0, 90.0);
  REQUIRE(coarse.size() == 3);
  CHECK(coarse[1] == Approx(0.0).margin(1e-12));
  CHECK(coarse[2] == Approx(90.0));
  CHECK(ScenarioConfig{}.grid_size() == 1801);
}

TEST_CASE("desired_pattern", "[scenario]") {
  const std::vector<double> grid{-10.0, 0.0, 10.0};
  const std::vector<double> center{0.0};
  const auto d = desired_pattern(grid, center, 5.0);
  CHECK(d(0) == 0.0);
  CHECK(d(1) == 1.0);
  CHECK(d(2) == 0.0);

  const std::vector<double> three{-40.0, 0.0, 40.0};
  const std::vector<double> at{-40.0};
  CHECK(desired_pattern(at, three, 5.0)(0) == 1.0);

  const std::vector<double> none;
  CHECK(desired_pattern(grid, none, 5.0).isZero());
}

TEST_CASE("channel statistics", "[scenario][property]") {
  auto draw = [](double attenuation_db) {
    ScenarioConfig c;
    c.antennas = 1000;
    c.users = 100;
    c.attenuation = attenuation_db;
    c.seed = 3;
    return generate_channels(c);
  };
  SECTION("0 dB gives unit variance") {
    const auto g = draw(0.0);
    const double var = g.cwiseAbs2().mean() - std::norm(g.mean());
    CHECK(var == Approx(1.0).epsilon(0.05));
  }
  SECTION("30 dB gives mean power 1e-3") {
    CHECK(draw(30.0).cwiseAbs2().mean() == Approx(1e-3).epsilon(0.05));
  }
}

TEST_CASE("channels are deterministic in the seed", "[scenario]") {
  ScenarioConfig c;
  const auto g1 = generate_channels(c);
  const auto g2 = generate_channels(c);
  CHECK(g1 == g2);
  c.seed = 8;
  CHECK(generate_channels(c) != g1);
}

TEST_CASE("build_scenario assembles consistent pieces", "[scenario]") {
  const auto s = build_scenario(ScenarioConfig{});
  CHECK(s.grid_size() == 1801);
  CHECK(s.channels.rows() == 3);
  CHECK(s.channels.cols() == 10);
  CHECK(s.steering.rows() == 10);
  for (Eigen::Index l = 0; l < s.grid_size(); l += 97) {
    CHECK(s.steering.col(l).squaredNorm() == Approx(10.0));
  }
  CHECK((s.desired.array() * (1.0 - s.desired.array())).abs().maxCoeff() == 0.0);
  CHECK(s.per_antenna_power() == Approx(0.1));
}

TEST_CASE("config validation", "[scenario]") {
  ScenarioConfig c;
  c.antennas = 2;
  c.users = 3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(build_scenario(c), ConfigError);

  ScenarioConfig z;
  z.efficiency = 1.0;
  CHECK_THROWS_AS(z.validate(), ConfigError);

  ScenarioConfig g;
  g.grid_step = 0.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);

  ScenarioConfig w;
  w.channels = ComplexMatrix::Ones(2, 10);
  CHECK_THROWS_AS(w.validate(), ConfigError);
}

TEST_CASE("config JSON round trip and rejection", "[scenario]") {
  ScenarioConfig c;
  c.seed = 42;
  c.users = 1;
  c.antennas = 2;
  c.channels = ComplexMatrix(1, 2);
  (*c.channels)(0, 0) = cplx(1.0, -0.5);
  (*c.channels)(0, 1) = cplx(0.0, 2.0);
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.seed == 42);
  CHECK(back.antennas == 2);
  REQUIRE(back.channels.has_value());
  CHECK(*back.channels == *c.channels);

  CHECK_THROWS_AS(config_from_json_text("{\"antennas\": 4,"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{\"antenas\": 4}"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{\"antennas\": \"ten\"}"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("[1, 2]"), ConfigError);
  CHECK(config_from_json_text("{}").antennas == 10);
}
