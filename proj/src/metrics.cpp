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

#include "iswpt/metrics.hpp"

#include <cmath>

#include "iswpt/error.hpp"

namespace iswpt {

RealVector beampattern(const HermitianMatrix& r, const ComplexMatrix& steering) {
  if (steering.rows() != r.dim()) throw DimensionError("beampattern: steering rows != dim(R)");
  const ComplexMatrix ra = r.matrix() * steering;
  // a^H R a is real for Hermitian R; the imaginary part is rounding noise
  return steering.conjugate().cwiseProduct(ra).colwise().sum().real().transpose();
}

double optimal_alpha(const RealVector& pattern, const RealVector& desired) {
  if (pattern.size() != desired.size()) throw DimensionError("optimal_alpha: length mismatch");
  const double dd = desired.squaredNorm();
  if (dd == 0.0) throw Error("optimal_alpha: desired pattern is identically zero");
  return desired.dot(pattern) / dd;
}

RadarLoss radar_loss(const RealVector& pattern, const RealVector& desired, AlphaMode mode) {
  if (pattern.size() != desired.size()) throw DimensionError("radar_loss: length mismatch");
  if (pattern.size() == 0) throw DimensionError("radar_loss: empty grid");
  const double alpha = mode.is_joint() ? optimal_alpha(pattern, desired) : *mode.fixed_value;
  const double loss = (alpha * desired - pattern).squaredNorm() / static_cast<double>(pattern.size());
  return {loss, alpha};
}

RadarLoss radar_loss(const HermitianMatrix& r, const Scenario& scenario, AlphaMode mode) {
  return radar_loss(beampattern(r, scenario.steering), scenario.desired, mode);
}

double harvested_power(const HermitianMatrix& r, const ComplexVector& channel_row, double zeta) {
  if (channel_row.size() != r.dim()) throw DimensionError("harvested_power: channel length != dim(R)");
  // g R g^H with g stored as a column of the row's entries
  const cplx value = channel_row.transpose() * r.matrix() * channel_row.conjugate();
  return zeta * value.real();
}

RealVector harvested_powers(const HermitianMatrix& r, const ComplexMatrix& channels, double zeta) {
  if (channels.cols() != r.dim()) throw DimensionError("harvested_powers: channel width != dim(R)");
  RealVector p(channels.rows());
  for (Eigen::Index m = 0; m < channels.rows(); ++m) {
    p(m) = harvested_power(r, channels.row(m).transpose(), zeta);
  }
  return p;
}

double wpt_loss(const HermitianMatrix& r, const RealVector& targets, const ComplexMatrix& channels,
                double zeta, WptLossMode mode) {
  if (targets.size() != channels.rows()) throw DimensionError("wpt_loss: one target per user");
  const RealVector p = harvested_powers(r, channels, zeta);
  double sum = 0.0;
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    double term = (targets(m) - p(m)) * (targets(m) - p(m));
    if (mode == WptLossMode::normalized) term /= targets(m) * targets(m);
    sum += term;
  }
  return sum / static_cast<double>(p.size());
}

MetricReport objective(const HermitianMatrix& r, double rho, const Scenario& scenario,
                       const RealVector& targets, WptLossMode mode) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error("objective: rho must lie in [0, 1]");
  MetricReport rep;
  const auto radar = radar_loss(r, scenario, AlphaMode::joint());
  rep.radar_loss = radar.loss;
  rep.alpha = radar.alpha;
  rep.per_user_power = harvested_powers(r, scenario.channels, scenario.config.efficiency);
  rep.sum_power = rep.per_user_power.sum();
  rep.wpt_loss = wpt_loss(r, targets, scenario.channels, scenario.config.efficiency, mode);
  rep.rho = rho;
  rep.objective = (1.0 - rho) * rep.radar_loss + rho * rep.wpt_loss;
  return rep;
}

}  // namespace iswpt
