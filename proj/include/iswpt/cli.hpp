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
// Experiment driver behind the `iswpt` executable:
//
//   iswpt targets <config.json>
//   iswpt design  <config.json> --method optimal --rho 0.1 --out run/opt
//   iswpt sweep   <config.json> --rhos 0,0.5,1 --methods all --out run/sweep
//
// Exit codes: 0 success, 2 usage or configuration error, 3 solver failure,
// 4 beamformer recovery failure. ISWPT_SEED overrides the config seed.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iswpt/designs.hpp"

namespace iswpt::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kSolverFailure = 3, kRecoveryFailure = 4 };

struct RunRecord {
  ScenarioConfig config;
  Method method = Method::optimal;
  double rho = 0.0;
  double radar_loss = 0.0;
  double wpt_loss = 0.0;
  double alpha = 0.0;
  RealVector per_user_power;
  double sum_power = 0.0;
  double objective = 0.0;
  int iterations = 0;
  double wall_time = 0.0;  // seconds; 0 unless timing was requested

  static RunRecord from(const ScenarioConfig& config, const DesignResult& design, double rho,
                        double wall_time);
  nlohmann::json to_json() const;
};

struct DesignArgs {
  std::string config_path;
  std::string method = "optimal";
  double rho = 0.5;
  std::string out_prefix;
  bool record_timing = false;
};

struct SweepArgs {
  std::string config_path;
  std::vector<double> rhos;          // empty means the default 11-point grid
  bool rhos_given = false;           // an explicitly empty list is an error
  std::vector<std::string> methods;  // empty or {"all"}: optimal, suboptimal, randomized
  std::string out_prefix;
  unsigned jobs = 0;                 // 0: hardware concurrency
  bool record_timing = false;
};

/// Reads and validates a config file, then applies ISWPT_SEED. Throws ConfigError.
ScenarioConfig load_config(const std::string& path);

/// rho = 0, 0.1, ..., 1 computed as i / 10.
std::vector<double> default_rhos();

int cmd_targets(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_design(const DesignArgs& args, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& err);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iswpt::cli
