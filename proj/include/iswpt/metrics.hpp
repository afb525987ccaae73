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

#include <optional>
#include <vector>

#include "iswpt/linalg.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt {

/// How the radar scaling factor alpha is chosen: the least-squares optimum
/// for the current pattern (joint) or a caller-supplied constant.
struct AlphaMode {
  std::optional<double> fixed_value;

  static AlphaMode joint() { return {}; }
  static AlphaMode fixed(double a) { return {a}; }
  bool is_joint() const { return !fixed_value.has_value(); }
};

/// WPT loss units. `absolute` is the squared power mismatch in W^2;
/// `normalized` divides each user's term by (P*_m)^2 and is meant for plots.
enum class WptLossMode { absolute, normalized };

struct MetricReport {
  double radar_loss = 0.0;
  double wpt_loss = 0.0;
  RealVector per_user_power;
  double sum_power = 0.0;
  double alpha = 0.0;
  double objective = 0.0;
  double rho = 0.0;
};

struct RadarLoss {
  double loss;
  double alpha;
};

/// p_l = a_l^H R a_l for every grid column of `steering`.
RealVector beampattern(const HermitianMatrix& r, const ComplexMatrix& steering);

/// argmin_alpha sum_l (alpha d_l - p_l)^2. Throws if d is identically zero.
double optimal_alpha(const RealVector& pattern, const RealVector& desired);

RadarLoss radar_loss(const RealVector& pattern, const RealVector& desired, AlphaMode mode);
RadarLoss radar_loss(const HermitianMatrix& r, const Scenario& scenario,
                     AlphaMode mode = AlphaMode::joint());

/// P_m = zeta g_m R g_m^H for one channel row.
double harvested_power(const HermitianMatrix& r, const ComplexVector& channel_row, double zeta);
RealVector harvested_powers(const HermitianMatrix& r, const ComplexMatrix& channels, double zeta);

double wpt_loss(const HermitianMatrix& r, const RealVector& targets, const ComplexMatrix& channels,
                double zeta, WptLossMode mode = WptLossMode::absolute);

/// (1 - rho) L_r + rho L_e with jointly optimal alpha.
MetricReport objective(const HermitianMatrix& r, double rho, const Scenario& scenario,
                       const RealVector& targets, WptLossMode mode = WptLossMode::absolute);

}  // namespace iswpt
