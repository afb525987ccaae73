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

#include "iswpt/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "iswpt/error.hpp"
#include "iswpt/io.hpp"

namespace iswpt::cli {

namespace {

using Clock = std::chrono::steady_clock;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const RecoveryError*>(&e)) return kRecoveryFailure;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DimensionError*>(&e)) {
    return kUsage;
  }
  return kSolverFailure;
}

const char* status_token(int code) {
  switch (code) {
    case kOk: return "ok";
    case kRecoveryFailure: return "recovery_failure";
    case kUsage: return "config_error";
    default: return "solver_failure";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw ConfigError("rho must lie in [0, 1], got " + io::format_double(rho));
  }
}

double effective_rho(Method m, double rho) {
  if (m == Method::radar_only) return 0.0;
  if (m == Method::wpt_only) return 1.0;
  return rho;
}

nlohmann::json report_json(const SolverReport& rep) {
  return {{"status", std::string(to_string(rep.status))},
          {"iterations", rep.iterations},
          {"primal_residual", rep.primal_residual},
          {"dual_residual", rep.dual_residual},
          {"objective", rep.objective_value}};
}

}  // namespace

RunRecord RunRecord::from(const ScenarioConfig& config, const DesignResult& design, double rho,
                          double wall_time) {
  RunRecord r;
  r.config = config;
  r.method = design.method;
  r.rho = rho;
  r.radar_loss = design.metrics.radar_loss;
  r.wpt_loss = design.metrics.wpt_loss;
  r.alpha = design.metrics.alpha;
  r.per_user_power = design.metrics.per_user_power;
  r.sum_power = design.metrics.sum_power;
  r.objective = design.metrics.objective;
  r.iterations = design.solver_report.iterations;
  r.wall_time = wall_time;
  return r;
}

nlohmann::json RunRecord::to_json() const {
  return {{"config", config_to_json(config)},
          {"method", std::string(to_string(method))},
          {"rho", rho},
          {"L_r", radar_loss},
          {"L_e", wpt_loss},
          {"alpha", alpha},
          {"per_user_power", io::real_vector_to_json(per_user_power)},
          {"sum_power", sum_power},
          {"objective", objective},
          {"iterations", iterations},
          {"wall_time", wall_time}};
}

ScenarioConfig load_config(const std::string& path) {
  ScenarioConfig cfg = config_from_json_text(read_file(path));
  if (const char* env = std::getenv("ISWPT_SEED"); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("ISWPT_SEED must be an unsigned integer, got '" + std::string(s) + "'");
    }
    cfg.seed = seed;
  }
  cfg.validate();
  return cfg;
}

std::vector<double> default_rhos() {
  std::vector<double> out;
  for (int i = 0; i <= 10; ++i) out.push_back(i / 10.0);
  return out;
}

int cmd_targets(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load_config(config_path);
    const Scenario scenario = build_scenario(cfg);
    const WptTargets targets = wpt_power_targets(scenario);
    const nlohmann::json doc = {{"config", config_to_json(cfg)},
                                {"targets", io::real_vector_to_json(targets.targets)},
                                {"sum_power", targets.targets.sum()},
                                {"solver", report_json(targets.solver_report)}};
    out << doc.dump(2) << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "iswpt targets: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

int cmd_design(const DesignArgs& args, std::ostream& err) {
  try {
    const auto method = parse_method(args.method);
    if (!method) throw ConfigError("unknown method '" + args.method + "'");
    require_rho(args.rho);
    if (args.out_prefix.empty()) throw ConfigError("--out prefix is required");
    const ScenarioConfig cfg = load_config(args.config_path);
    const Scenario scenario = build_scenario(cfg);

    const auto start = Clock::now();
    const WptTargets targets = wpt_power_targets(scenario);
    const double rho = effective_rho(*method, args.rho);
    const DesignResult design = run_design(*method, scenario, targets, rho);
    const double wall =
        args.record_timing ? std::chrono::duration<double>(Clock::now() - start).count() : 0.0;

    nlohmann::json doc = RunRecord::from(cfg, design, rho, wall).to_json();
    doc["status"] = "ok";
    doc["targets"] = io::real_vector_to_json(design.targets);
    doc["solver"] = report_json(design.solver_report);
    doc["R"] = io::complex_matrix_to_json(design.r.matrix());
    doc["W"] = io::complex_matrix_to_json(design.beams.w);
    if (design.lambda) doc["lambda"] = io::real_vector_to_json(*design.lambda);
    {
      auto out = open_output(args.out_prefix + ".result.json");
      out << doc.dump(2) << '\n';
    }
    {
      auto out = open_output(args.out_prefix + ".beampattern.csv");
      const RealVector pattern = beampattern(design.r, scenario.steering);
      std::string text = "angle_deg,gain_watts\n";
      for (Eigen::Index l = 0; l < pattern.size(); ++l) {
        text += io::format_double(scenario.grid[static_cast<std::size_t>(l)]);
        text += ',';
        text += io::format_double(pattern(l));
        text += '\n';
      }
      out << text;
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "iswpt design: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

int cmd_sweep(const SweepArgs& args, std::ostream& err) {
  struct Row {
    Method method;
    double rho;
    std::optional<RunRecord> record;
    int code = kOk;
    std::string message;
  };
  std::vector<Row> rows;
  try {
    const std::vector<double> rhos =
        args.rhos.empty() && !args.rhos_given ? default_rhos() : args.rhos;
    if (rhos.empty()) throw ConfigError("--rhos must list at least one value");
    for (double r : rhos) require_rho(r);

    std::vector<Method> methods;
    const bool all = args.methods.empty() ||
                     (args.methods.size() == 1 && args.methods.front() == "all");
    if (all) {
      methods = {Method::optimal, Method::suboptimal, Method::randomized};
    } else {
      for (const auto& name : args.methods) {
        const auto m = parse_method(name);
        if (!m) throw ConfigError("unknown method '" + name + "'");
        if (*m == Method::radar_only || *m == Method::wpt_only) {
          throw ConfigError("boundary methods are always included; do not list '" + name + "'");
        }
        if (std::find(methods.begin(), methods.end(), *m) == methods.end()) methods.push_back(*m);
      }
    }
    if (args.out_prefix.empty()) throw ConfigError("--out prefix is required");

    for (Method m : methods) {
      for (double r : rhos) rows.push_back({m, r, std::nullopt, kOk, {}});
    }
    rows.push_back({Method::radar_only, 0.0, std::nullopt, kOk, {}});
    rows.push_back({Method::wpt_only, 1.0, std::nullopt, kOk, {}});
  } catch (const std::exception& e) {
    err << "iswpt sweep: " << e.what() << '\n';
    return kUsage;
  }

  ScenarioConfig cfg;
  Scenario scenario;
  WptTargets targets;
  try {
    cfg = load_config(args.config_path);
    scenario = build_scenario(cfg);
    targets = wpt_power_targets(scenario);
  } catch (const std::exception& e) {
    err << "iswpt sweep: " << e.what() << '\n';
    return exit_code_for(e);
  }

  // Work pool; each worker fills its own rows, so scheduling never affects
  // the output.
  unsigned jobs = args.jobs ? args.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(rows.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      Row& row = rows[i];
      try {
        const auto start = Clock::now();
        const DesignResult d = run_design(row.method, scenario, targets, row.rho);
        const double wall =
            args.record_timing ? std::chrono::duration<double>(Clock::now() - start).count()
                               : 0.0;
        row.record = RunRecord::from(cfg, d, row.rho, wall);
      } catch (const std::exception& e) {
        row.code = exit_code_for(e);
        row.message = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const auto ma = to_string(a.method);
    const auto mb = to_string(b.method);
    return ma != mb ? ma < mb : a.rho < b.rho;
  });

  std::string text =
      "method,rho,objective,L_r,L_e,sum_power_watts,alpha,iters,wall_time_s,status\n";
  std::size_t successes = 0;
  for (const Row& row : rows) {
    text += to_string(row.method);
    text += ',';
    text += io::format_double(row.rho);
    if (row.record) {
      ++successes;
      const RunRecord& r = *row.record;
      for (double v : {r.objective, r.radar_loss, r.wpt_loss, r.sum_power, r.alpha}) {
        text += ',';
        text += io::format_double(v);
      }
      text += ',' + std::to_string(r.iterations) + ',' + io::format_double(r.wall_time);
    } else {
      text += ",,,,,,,,";
      err << "iswpt sweep: " << to_string(row.method) << " rho=" << io::format_double(row.rho)
          << ": " << row.message << '\n';
    }
    text += ',';
    text += status_token(row.code);
    text += '\n';
  }
  try {
    auto out = open_output(args.out_prefix + ".sweep.csv");
    out << text;
  } catch (const std::exception& e) {
    err << "iswpt sweep: " << e.what() << '\n';
    return kUsage;
  }
  return successes > 0 ? kOk : kSolverFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmit beamforming for integrated sensing and wireless power transfer"};
  app.require_subcommand(1);

  std::string targets_config;
  auto* targets_cmd = app.add_subcommand("targets", "Print the per-user power targets P*");
  targets_cmd->add_option("config", targets_config, "Scenario config (JSON)")->required();

  DesignArgs design;
  std::string design_rho = "0.5";
  auto* design_cmd = app.add_subcommand("design", "Run one design and export R, W, beampattern");
  design_cmd->add_option("config", design.config_path, "Scenario config (JSON)")->required();
  design_cmd->add_option("--method", design.method,
                         "optimal | suboptimal | randomized | radar-only | wpt-only");
  design_cmd->add_option("--rho", design_rho, "Weight of the power-transfer term in [0, 1]");
  design_cmd->add_option("--out", design.out_prefix, "Output prefix")->required();
  design_cmd->add_flag("--record-timing", design.record_timing,
                       "Record wall time (outputs are then not byte-stable)");

  SweepArgs sweep;
  std::optional<std::string> sweep_rhos;
  std::string sweep_methods = "all";
  auto* sweep_cmd = app.add_subcommand("sweep", "Weighted-sum sweep over rho");
  sweep_cmd->add_option("config", sweep.config_path, "Scenario config (JSON)")->required();
  sweep_cmd->add_option("--rhos", sweep_rhos, "Comma-separated rho values (default 0,0.1,...,1)");
  sweep_cmd->add_option("--methods", sweep_methods,
                        "Comma-separated: optimal,suboptimal,randomized or all");
  sweep_cmd->add_option("--out", sweep.out_prefix, "Output prefix")->required();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads (default: logical cores)");
  sweep_cmd->add_flag("--record-timing", sweep.record_timing,
                      "Record wall time (outputs are then not byte-stable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (targets_cmd->parsed()) return cmd_targets(targets_config, out, err);
  if (design_cmd->parsed()) {
    const auto rho = parse_number(design_rho);
    if (!rho) {
      err << "iswpt design: --rho expects a number, got '" << design_rho << "'\n";
      return kUsage;
    }
    design.rho = *rho;
    return cmd_design(design, err);
  }
  if (sweep_rhos) {
    sweep.rhos_given = true;
    const auto trimmed = sweep_rhos->find_first_not_of(' ');
    if (trimmed != std::string::npos) {
      for (const auto& token : split(*sweep_rhos)) {
        const auto v = parse_number(token);
        if (!v) {
          err << "iswpt sweep: --rhos expects comma-separated numbers, got '" << *sweep_rhos
              << "'\n";
          return kUsage;
        }
        sweep.rhos.push_back(*v);
      }
    }
  }
  for (const auto& m : split(sweep_methods)) {
    if (!m.empty()) sweep.methods.push_back(m);
  }
  return cmd_sweep(sweep, err);
}

}  // namespace iswpt::cli
