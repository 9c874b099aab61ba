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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace marglik {

namespace {

constexpr int kScanPoints = 1024;

struct SimpsonRun {
  const std::function<double(double)>* f = nullptr;
  int max_depth = 40;
  bool depth_exhausted = false;
  double error_estimate = 0.0;  // accumulated local estimates
};

// Standard adaptive Simpson with Richardson extrapolation. `whole` is the
// Simpson estimate over [a, b] with midpoint m.
double adapt(SimpsonRun& run, double a, double m, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*run.f)(lm);
  const double frm = (*run.f)(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth >= run.max_depth) {
    if (std::abs(delta) > 15.0 * tol) {
      run.depth_exhausted = true;
    }
    run.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adapt(run, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(run, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

void validate(const QuadratureConfig& cfg) {
  if (!std::isfinite(cfg.center)) {
    throw error(errc::invalid_argument, "center must be finite");
  }
  if (!(cfg.half_width_sds > 0.0) || !std::isfinite(cfg.half_width_sds)) {
    throw error(errc::invalid_argument, "half_width_sds must be positive and finite");
  }
  if (!(cfg.scale > 0.0) || !std::isfinite(cfg.scale)) {
    throw error(errc::invalid_scale, "scale must be positive and finite");
  }
  if (!(cfg.abs_tol > 0.0) || !std::isfinite(cfg.abs_tol)) {
    throw error(errc::invalid_argument, "abs_tol must be positive and finite");
  }
  if (cfg.max_depth < 1) {
    throw error(errc::invalid_argument, "max_depth must be >= 1");
  }
}

QuadratureConfig default_quadrature_config(const std::optional<PosteriorParams>& hint,
                                           const NormalModelConfig& config) {
  validate(config);
  QuadratureConfig cfg;
  if (hint.has_value()) {
    cfg.center = hint->mean;
    cfg.scale = std::max(std::sqrt(hint->variance), config.sigma0);
  } else {
    cfg.center = config.theta0;
    cfg.scale = config.sigma0;
  }
  return cfg;
}

double quadrature_log_integral(const std::function<double(double)>& log_integrand,
                               const QuadratureConfig& cfg) {
  validate(cfg);
  const double half_width = cfg.half_width_sds * cfg.scale;
  const double a = cfg.center - half_width;
  const double b = cfg.center + half_width;

  // Scan for the maximum of the log integrand; the scan nodes double as the
  // base cells of the quadrature.
  std::vector<double> xs(kScanPoints);
  std::vector<double> gs(kScanPoints);
  double g_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / (kScanPoints - 1);
    const double g = log_integrand(x);
    if (std::isnan(g) || g == std::numeric_limits<double>::infinity()) {
      throw error(errc::invalid_argument,
                  "log integrand must be finite or -inf, got " + std::to_string(g) +
                      " at theta = " + std::to_string(x));
    }
    xs[i] = x;
    gs[i] = g;
    g_max = std::max(g_max, g);
  }
  if (!std::isfinite(g_max)) {
    throw error(errc::empty_support,
                "log integrand is -inf everywhere on the integration window");
  }

  const std::function<double(double)> shifted = [&](double x) {
    const double g = log_integrand(x);
    return g == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(g - g_max);
  };

  SimpsonRun run;
  run.f = &shifted;
  run.max_depth = cfg.max_depth;
  const double cell_tol = cfg.abs_tol / (kScanPoints - 1);
  double total = 0.0;
  double f_left = gs[0] == -std::numeric_limits<double>::infinity()
                      ? 0.0
                      : std::exp(gs[0] - g_max);
  for (int i = 0; i + 1 < kScanPoints; ++i) {
    const double f_right =
        gs[i + 1] == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(gs[i + 1] - g_max);
    const double m = 0.5 * (xs[i] + xs[i + 1]);
    const double fm = shifted(m);
    const double whole = (xs[i + 1] - xs[i]) / 6.0 * (f_left + 4.0 * fm + f_right);
    total += adapt(run, xs[i], m, xs[i + 1], f_left, fm, f_right, whole, cell_tol, 0);
    f_left = f_right;
  }

  const double result = g_max + std::log(total);
  // Depth-limited nodes are only fatal when the accumulated error estimate
  // actually misses abs_tol; isolated rough spots (such as support edges)
  // with negligible residuals are fine.
  if (run.depth_exhausted && run.error_estimate > cfg.abs_tol) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "quadrature reached max_depth %d before abs_tol %.3g; best value %.17g with "
                  "error estimate %.3g",
                  cfg.max_depth, cfg.abs_tol, result, run.error_estimate);
    throw tolerance_not_met(result, run.error_estimate, msg);
  }
  return result;
}

double quadrature_log_marginal(const BayesModelSpec& model, const Dataset& data,
                               const QuadratureConfig& cfg) {
  return quadrature_log_integral(
      [&](double theta) {
        return model.log_likelihood(theta, data) + model.log_prior(theta);
      },
      cfg);
}

}  // namespace marglik
