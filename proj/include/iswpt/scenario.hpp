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

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "iswpt/linalg.hpp"

namespace iswpt {

/// Problem instance parameters. Defaults reproduce the desk-scale setup:
/// 10 antennas, 3 energy receivers, 1 W, 50 % conversion efficiency, 30 dB
/// channel attenuation, half-wavelength ULA, 0.1 degree grid over
/// [-90, 90] and three 5 degree half-width main lobes at -40, 0 and 40.
struct ScenarioConfig {
  int antennas = 10;
  int users = 3;
  double total_power = 1.0;         // W
  double efficiency = 0.5;          // zeta
  double attenuation = 30.0;        // dB (power)
  double element_spacing = 0.5;     // wavelengths
  double grid_start = -90.0;        // degrees
  double grid_stop = 90.0;
  double grid_step = 0.1;
  std::vector<double> mainlobe_centers{-40.0, 0.0, 40.0};
  double mainlobe_halfwidth = 5.0;
  std::uint64_t seed = 7;

  /// Replaces the random channels (users x antennas); used for synthetic
  /// test geometries.
  std::optional<ComplexMatrix> channels;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  std::size_t grid_size() const;
};

/// Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig config_from_json_text(const std::string& text);
nlohmann::json config_to_json(const ScenarioConfig& c);

struct Scenario {
  ScenarioConfig config;
  ComplexMatrix channels;   // M x N, row m is g_m
  ComplexMatrix steering;   // N x L, column l is a(theta_l)
  RealVector desired;       // length L
  std::vector<double> grid; // degrees

  int antennas() const { return config.antennas; }
  int users() const { return config.users; }
  Eigen::Index grid_size() const { return steering.cols(); }
  double per_antenna_power() const { return config.total_power / config.antennas; }
};

// Standard complex Gaussian samples from std::mt19937_64 (bit-identical on
// every conforming standard library) via Box-Muller. Uniforms take the top 53
// bits of each draw, so no implementation-defined distribution is involved.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double uniform_open();      // (0, 1]
  cplx standard_complex();    // (u + jv)/sqrt(2), E|z|^2 = 1

 private:
  std::mt19937_64 engine_;
};

ComplexVector steering_vector(double theta_deg, int antennas, double spacing);
ComplexMatrix steering_matrix(std::span<const double> grid_deg, int antennas, double spacing);

std::vector<double> angle_grid(double start, double stop, double step);

RealVector desired_pattern(std::span<const double> grid_deg, std::span<const double> centers,
                           double halfwidth);

ComplexMatrix generate_channels(const ScenarioConfig& config);

Scenario build_scenario(const ScenarioConfig& config);

}  // namespace iswpt
