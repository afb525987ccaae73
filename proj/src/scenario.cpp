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

#include "iswpt/scenario.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "iswpt/error.hpp"
#include "iswpt/io.hpp"

namespace iswpt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kGridSlack = 1e-9;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "antennas",   "users",          "total_power",      "efficiency",
      "attenuation", "element_spacing", "grid_start",      "grid_stop",
      "grid_step",  "mainlobe_centers", "mainlobe_halfwidth", "seed",
      "channels"};
  return keys;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (users < 1) throw ConfigError("users must be >= 1");
  if (antennas < users) throw ConfigError("antennas must be >= users");
  if (!(efficiency > 0.0 && efficiency < 1.0)) throw ConfigError("efficiency must lie in (0, 1)");
  if (!(total_power > 0.0)) throw ConfigError("total_power must be positive");
  if (!(grid_step > 0.0)) throw ConfigError("grid_step must be positive");
  if (!(grid_start < grid_stop)) throw ConfigError("grid_start must be below grid_stop");
  if (!(mainlobe_halfwidth > 0.0)) throw ConfigError("mainlobe_halfwidth must be positive");
  if (!std::isfinite(attenuation) || !std::isfinite(element_spacing)) {
    throw ConfigError("attenuation and element_spacing must be finite");
  }
  if (channels && (channels->rows() != users || channels->cols() != antennas)) {
    throw ConfigError("channels override must be users x antennas");
  }
}

std::size_t ScenarioConfig::grid_size() const {
  return static_cast<std::size_t>(std::floor((grid_stop - grid_start) / grid_step + kGridSlack)) +
         1;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ScenarioConfig c;
  read_field(j, "antennas", c.antennas);
  read_field(j, "users", c.users);
  read_field(j, "total_power", c.total_power);
  read_field(j, "efficiency", c.efficiency);
  read_field(j, "attenuation", c.attenuation);
  read_field(j, "element_spacing", c.element_spacing);
  read_field(j, "grid_start", c.grid_start);
  read_field(j, "grid_stop", c.grid_stop);
  read_field(j, "grid_step", c.grid_step);
  read_field(j, "mainlobe_centers", c.mainlobe_centers);
  read_field(j, "mainlobe_halfwidth", c.mainlobe_halfwidth);
  read_field(j, "seed", c.seed);
  if (j.contains("channels") && !j.at("channels").is_null()) {
    try {
      c.channels = io::complex_matrix_from_json(j.at("channels"));
    } catch (const Error& e) {
      throw ConfigError(std::string("config field 'channels': ") + e.what());
    }
  }
  c.validate();
  return c;
}

ScenarioConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["antennas"] = c.antennas;
  j["users"] = c.users;
  j["total_power"] = c.total_power;
  j["efficiency"] = c.efficiency;
  j["attenuation"] = c.attenuation;
  j["element_spacing"] = c.element_spacing;
  j["grid_start"] = c.grid_start;
  j["grid_stop"] = c.grid_stop;
  j["grid_step"] = c.grid_step;
  j["mainlobe_centers"] = c.mainlobe_centers;
  j["mainlobe_halfwidth"] = c.mainlobe_halfwidth;
  j["seed"] = c.seed;
  if (c.channels) j["channels"] = io::complex_matrix_to_json(*c.channels);
  return j;
}

double GaussianStream::uniform_open() {
  // 53 random bits mapped to {1, ..., 2^53} / 2^53
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

cplx GaussianStream::standard_complex() {
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return cplx(radius * std::cos(angle), radius * std::sin(angle)) / std::numbers::sqrt2;
}

ComplexVector steering_vector(double theta_deg, int antennas, double spacing) {
  if (antennas < 1) throw DimensionError("steering_vector: antennas must be >= 1");
  ComplexVector a(antennas);
  const double phase = 2.0 * std::numbers::pi * spacing * std::sin(theta_deg * kDeg);
  for (int n = 0; n < antennas; ++n) a(n) = std::polar(1.0, phase * n);
  return a;
}

ComplexMatrix steering_matrix(std::span<const double> grid_deg, int antennas, double spacing) {
  ComplexMatrix a(antennas, static_cast<Eigen::Index>(grid_deg.size()));
  for (std::size_t l = 0; l < grid_deg.size(); ++l) {
    a.col(static_cast<Eigen::Index>(l)) = steering_vector(grid_deg[l], antennas, spacing);
  }
  return a;
}

std::vector<double> angle_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(start < stop)) throw ConfigError("angle_grid: invalid range");
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + kGridSlack)) + 1;
  std::vector<double> grid(count);
  for (std::size_t l = 0; l < count; ++l) grid[l] = start + static_cast<double>(l) * step;
  return grid;
}

RealVector desired_pattern(std::span<const double> grid_deg, std::span<const double> centers,
                           double halfwidth) {
  if (!(halfwidth > 0.0)) throw ConfigError("desired_pattern: halfwidth must be positive");
  RealVector d = RealVector::Zero(static_cast<Eigen::Index>(grid_deg.size()));
  for (std::size_t l = 0; l < grid_deg.size(); ++l) {
    for (double c : centers) {
      if (std::abs(grid_deg[l] - c) <= halfwidth + kGridSlack) {
        d(static_cast<Eigen::Index>(l)) = 1.0;
        break;
      }
    }
  }
  return d;
}

ComplexMatrix generate_channels(const ScenarioConfig& config) {
  const double amplitude = std::pow(10.0, -config.attenuation / 20.0);
  GaussianStream stream(config.seed);
  ComplexMatrix g(config.users, config.antennas);
  for (int m = 0; m < config.users; ++m) {
    for (int n = 0; n < config.antennas; ++n) g(m, n) = amplitude * stream.standard_complex();
  }
  return g;
}

Scenario build_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario s;
  s.config = config;
  s.grid = angle_grid(config.grid_start, config.grid_stop, config.grid_step);
  s.steering = steering_matrix(s.grid, config.antennas, config.element_spacing);
  s.desired = desired_pattern(s.grid, config.mainlobe_centers, config.mainlobe_halfwidth);
  s.channels = config.channels ? *config.channels : generate_channels(config);
  return s;
}

}  // namespace iswpt
