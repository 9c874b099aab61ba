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

#include <functional>
#include <optional>

#include "model.hpp"

namespace marglik {

// Finite integration window centered on the posterior (or prior) location.
// With Gaussian-dominated tails a 12-sd half width truncates less mass than
// the quadrature tolerance resolves; heavy-tailed priors are out of scope.
struct QuadratureConfig {
  double center = 0.0;
  double half_width_sds = 12.0;
  double scale = 1.0;      // characteristic theta sd
  double abs_tol = 1e-10;  // on the max-shifted linear-scale integral
  int max_depth = 40;
};

void validate(const QuadratureConfig& cfg);

QuadratureConfig default_quadrature_config(const std::optional<PosteriorParams>& hint,
                                           const NormalModelConfig& config);

// log of the integral of exp(log_integrand) over the window: a 1024-point
// scan locates the maximum, adaptive Simpson integrates exp(g - g_max) per
// scan cell so a narrow mode cannot hide between nodes, and the result is
// log-restored.
double quadrature_log_integral(const std::function<double(double)>& log_integrand,
                               const QuadratureConfig& cfg);

// Independent evaluation of the marginal-likelihood integral for any model.
double quadrature_log_marginal(const BayesModelSpec& model, const Dataset& data,
                               const QuadratureConfig& cfg);

}  // namespace marglik
