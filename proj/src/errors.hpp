// Copyright 2026 the marglik authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace marglik {

enum class errc {
  ok = 0,
  invalid_argument,
  empty_dataset,
  invalid_observation,
  invalid_scale,
  sample_too_small,
  bad_initialization,
  degenerate_sample,
  out_of_grid_range,
  density_floor,
  empty_support,
  tolerance_not_met,
  empty_input,
  io_error,
  parse_error,
};

// Canonical upper-case name, e.g. "E_DENSITY_FLOOR". Doubles as the
// machine-parsable prefix on CLI error lines.
const char* errc_name(errc code);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Quadrature gave up before reaching abs_tol. Carries the best value and the
// error estimate actually achieved so callers can still report them.
class tolerance_not_met : public error {
 public:
  tolerance_not_met(double best_value, double achieved_tol, const std::string& what)
      : error(errc::tolerance_not_met, what),
        best_value_(best_value),
        achieved_tol_(achieved_tol) {}

  double best_value() const noexcept { return best_value_; }
  double achieved_tol() const noexcept { return achieved_tol_; }

 private:
  double best_value_;
  double achieved_tol_;
};

// The estimated posterior density at a draw fell to or below the floor, which
// signals a support mismatch between the sample and the density estimate.
class density_floor_violation : public error {
 public:
  density_floor_violation(double theta, std::size_t index, const std::string& what)
      : error(errc::density_floor, what), theta_(theta), index_(index) {}

  double theta() const noexcept { return theta_; }
  std::size_t index() const noexcept { return index_; }

 private:
  double theta_;
  std::size_t index_;
};

}  // namespace marglik
