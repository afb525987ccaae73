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

#include <stdexcept>
#include <string>

namespace iswpt {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario configuration or malformed config document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Matrix expected to be positive semidefinite has a significantly negative eigenvalue.
class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double most_negative)
      : Error(what), most_negative_(most_negative) {}
  double most_negative_eigenvalue() const noexcept { return most_negative_; }

 private:
  double most_negative_;
};

// The conic solver did not produce a usable solution.
class SolverError : public Error {
 public:
  using Error::Error;
};

// WW^H = R or GW = H violated after MRT-structured recovery.
class RecoveryError : public Error {
 public:
  RecoveryError(const std::string& what, double covariance_residual, double channel_residual)
      : Error(what),
        covariance_residual_(covariance_residual),
        channel_residual_(channel_residual) {}
  double covariance_residual() const noexcept { return covariance_residual_; }
  double channel_residual() const noexcept { return channel_residual_; }

 private:
  double covariance_residual_;
  double channel_residual_;
};

}  // namespace iswpt
