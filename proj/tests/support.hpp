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
// Shared helpers for the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "iswpt/linalg.hpp"
#include "iswpt/scenario.hpp"

namespace iswpt::testing {

inline ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

// B B^H with B n x rank; rank < n gives a singular PSD matrix.
inline HermitianMatrix random_psd(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  const ComplexMatrix b = random_complex(n, rank, rng);
  return HermitianMatrix::symmetrized(b * b.adjoint());
}

inline HermitianMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix b = random_complex(n, n, rng);
  return HermitianMatrix::symmetrized(b + b.adjoint());
}

inline double rel_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

// Unitary-invariant check used where eigenvectors are only defined up to phase.
inline double unitarity_error(const ComplexMatrix& q) {
  return (q.adjoint() * q - ComplexMatrix::Identity(q.cols(), q.cols())).norm();
}

// Sum-power maximizing targets for a single user and two antennas: aligning
// the off-diagonal phase gives P* = zeta * (Pt/2) * (|g1| + |g2|)^2.
inline double two_antenna_power_target(const Scenario& s) {
  const double c = s.config.total_power / 2.0;
  const double amp = std::abs(s.channels(0, 0)) + std::abs(s.channels(0, 1));
  return s.config.efficiency * c * amp * amp;
}

// Exhaustive search of the relaxed weighted objective for N = 2, M = 1.
// Feasible covariances are [[c, z], [conj(z), c]] with |z| <= c, c = Pt/2.
// The disc is covered by a (grid x grid) lattice plus `ring` samples on its
// boundary, where rank-1 optima live. Alpha uses its least-squares value.
inline double brute_force_two_antenna(const Scenario& s, double rho, double target, int grid = 401,
                                      int ring = 4000) {
  const double c = s.config.total_power / 2.0;
  const double zeta = s.config.efficiency;
  const Eigen::Index L = s.steering.cols();
  std::vector<double> ur(L), ui(L), d(L);
  double dd = 0.0;
  for (Eigen::Index l = 0; l < L; ++l) {
    const cplx u = std::conj(s.steering(0, l)) * s.steering(1, l);
    ur[l] = u.real();
    ui[l] = u.imag();
    d[l] = s.desired(l);
    dd += d[l] * d[l];
  }
  const cplx g0 = s.channels(0, 0);
  const cplx g1 = s.channels(0, 1);
  const double diag_gain = c * (std::norm(g0) + std::norm(g1));
  const cplx cross = g0 * std::conj(g1);

  auto evaluate = [&](double x, double y) {
    // a^H R a = 2c + 2 Re(conj(a0) a1 z)
    double dp = 0.0;
    for (Eigen::Index l = 0; l < L; ++l) dp += d[l] * (2.0 * c + 2.0 * (x * ur[l] - y * ui[l]));
    const double alpha = dp / dd;
    double lr = 0.0;
    for (Eigen::Index l = 0; l < L; ++l) {
      const double e = alpha * d[l] - (2.0 * c + 2.0 * (x * ur[l] - y * ui[l]));
      lr += e * e;
    }
    lr /= static_cast<double>(L);
    const double p = zeta * (diag_gain + 2.0 * (x * cross.real() - y * cross.imag()));
    const double le = (target - p) * (target - p);
    return (1.0 - rho) * lr + rho * le;
  };

  double best = std::numeric_limits<double>::infinity();
  const double h = 2.0 * c / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    const double x = -c + i * h;
    for (int j = 0; j < grid; ++j) {
      const double y = -c + j * h;
      if (x * x + y * y > c * c) continue;
      best = std::min(best, evaluate(x, y));
    }
  }
  for (int k = 0; k < ring; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / ring;
    best = std::min(best, evaluate(c * std::cos(phi), c * std::sin(phi)));
  }
  return best;
}

// Random two-antenna, single-user scenario with a coarse grid.
inline Scenario random_two_antenna_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-60.0, 60.0);
  ScenarioConfig c;
  c.antennas = 2;
  c.users = 1;
  c.grid_step = 1.0;
  c.mainlobe_centers = {center(rng)};
  c.mainlobe_halfwidth = 10.0;
  c.seed = seed;
  return build_scenario(c);
}

}  // namespace iswpt::testing
