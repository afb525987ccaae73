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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "iswpt/designs.hpp"
#include "iswpt/error.hpp"

namespace py = pybind11;
using namespace iswpt;

namespace {

Scenario scenario_from_json(const std::string& config_json) {
  return build_scenario(config_from_json_text(config_json));
}

HermitianMatrix to_hermitian(const ComplexMatrix& m) { return HermitianMatrix::symmetrized(m); }

py::dict metrics_dict(const MetricReport& m) {
  py::dict d;
  d["L_r"] = m.radar_loss;
  d["L_e"] = m.wpt_loss;
  d["alpha"] = m.alpha;
  d["per_user_power"] = m.per_user_power;
  d["sum_power"] = m.sum_power;
  d["objective"] = m.objective;
  d["rho"] = m.rho;
  return d;
}

py::dict report_dict(const SolverReport& r) {
  py::dict d;
  d["status"] = std::string(to_string(r.status));
  d["iterations"] = r.iterations;
  d["primal_residual"] = r.primal_residual;
  d["dual_residual"] = r.dual_residual;
  d["objective"] = r.objective_value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transmit beamforming for integrated sensing and wireless power transfer";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<RecoveryError>(m, "RecoveryError", base.ptr());
  py::register_exception<NotPsdError>(m, "NotPsdError", base.ptr());

  m.def(
      "default_config", [] { return config_to_json(ScenarioConfig{}).dump(); },
      "Default scenario config as a JSON string.");

  m.def(
      "steering_vector",
      [](double theta_deg, int antennas, double spacing) {
        return steering_vector(theta_deg, antennas, spacing);
      },
      py::arg("theta_deg"), py::arg("antennas"), py::arg("spacing") = 0.5);

  m.def(
      "channels", [](const std::string& config) { return scenario_from_json(config).channels; },
      py::arg("config"), "Channel matrix G (users x antennas) for a config.");

  m.def(
      "beampattern",
      [](const ComplexMatrix& r, const std::string& config) {
        const Scenario s = scenario_from_json(config);
        return py::make_tuple(s.grid, beampattern(to_hermitian(r), s.steering));
      },
      py::arg("R"), py::arg("config"), "(angles in degrees, a^H R a per angle).");

  m.def(
      "power_targets",
      [](const std::string& config) {
        const WptTargets t = wpt_power_targets(scenario_from_json(config));
        return py::make_tuple(t.targets, ComplexMatrix(t.r.matrix()), report_dict(t.solver_report));
      },
      py::arg("config"), "(P*, maximizing covariance, solver report).");

  m.def(
      "objective",
      [](const ComplexMatrix& r, double rho, const std::string& config,
         const RealVector& targets) {
        return metrics_dict(objective(to_hermitian(r), rho, scenario_from_json(config), targets));
      },
      py::arg("R"), py::arg("rho"), py::arg("config"), py::arg("targets"));

  m.def(
      "design",
      [](const std::string& config, const std::string& method, double rho) {
        const auto which = parse_method(method);
        if (!which) throw ConfigError("unknown method '" + method + "'");
        const Scenario s = scenario_from_json(config);
        DesignResult d;
        {
          py::gil_scoped_release release;
          d = run_design(*which, s, wpt_power_targets(s), rho);
        }
        py::dict out;
        out["method"] = std::string(to_string(d.method));
        out["R"] = ComplexMatrix(d.r.matrix());
        out["W"] = d.beams.w;
        out["metrics"] = metrics_dict(d.metrics);
        out["solver"] = report_dict(d.solver_report);
        out["targets"] = d.targets;
        if (d.lambda) out["lambda"] = *d.lambda;
        return out;
      },
      py::arg("config"), py::arg("method") = "optimal", py::arg("rho") = 0.5);

  m.def(
      "rank1_reconstruct",
      [](const ComplexMatrix& r) { return rank1_reconstruct(to_hermitian(r)).w; }, py::arg("R"));

  m.def(
      "mrt_recover",
      [](const ComplexMatrix& r, const ComplexMatrix& g, const RealVector& lambda) {
        return mrt_recover(to_hermitian(r), g, lambda).w;
      },
      py::arg("R"), py::arg("G"), py::arg("lam"));

  m.def(
      "hermitian_sqrt",
      [](const ComplexMatrix& a) { return linalg::hermitian_sqrt(to_hermitian(a)).matrix(); },
      py::arg("A"));
  m.def(
      "project_psd",
      [](const ComplexMatrix& a) { return linalg::project_psd(to_hermitian(a)).matrix(); },
      py::arg("A"));
  m.def(
      "psd_factor", [](const ComplexMatrix& a) { return linalg::psd_factor(to_hermitian(a)); },
      py::arg("A"));
  m.def(
      "qr",
      [](const ComplexMatrix& a) {
        const auto f = linalg::qr_full(a);
        return py::make_tuple(f.q, f.t);
      },
      py::arg("A"), "Full QR with nonnegative real diagonal of T.");
}
