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

#include "kde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace marglik {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// phi((k*step)/h) underflows to zero past this many standard deviations, so
// the convolution can stop there without changing any double-precision sum.
constexpr double kKernelReachSds = 39.0;

void check_sample(std::span<const double> sample) {
  if (sample.size() < 2) {
    throw error(errc::sample_too_small, "density estimation requires at least 2 points, got " +
                                            std::to_string(sample.size()));
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!std::isfinite(sample[i])) {
      throw error(errc::invalid_observation,
                  "sample point " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

void validate(const KdeConfig& cfg) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&cfg.bandwidth_rule)) {
    if (!(fixed->h > 0.0) || !std::isfinite(fixed->h)) {
      throw error(errc::invalid_scale, "fixed bandwidth must be positive and finite");
    }
  }
  if (cfg.grid_size < 2) {
    throw error(errc::invalid_argument, "grid_size must be >= 2");
  }
  if (!(cfg.padding_bandwidths > 0.0) || !std::isfinite(cfg.padding_bandwidths)) {
    throw error(errc::invalid_argument, "padding_bandwidths must be positive and finite");
  }
}

double silverman_bandwidth(std::span<const double> sample) {
  check_sample(sample);
  const std::size_t n = sample.size();
  const double dn = static_cast<double>(n);

  double sum = 0.0;
  for (double v : sample) {
    sum += v;
  }
  const double mean = sum / dn;
  double ss = 0.0;
  for (double v : sample) {
    const double d = v - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (dn - 1.0));

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const double pos = q * (dn - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) {
      return sorted.back();
    }
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);

  const double spread = std::min(sd, iqr / 1.349);
  if (!(spread > 0.0)) {
    throw error(errc::degenerate_sample,
                "sample spread is zero (sd or IQR); use a fixed bandwidth instead");
  }
  return 0.9 * spread * std::pow(dn, -0.2);
}

double resolve_bandwidth(std::span<const double> sample, const BandwidthRule& rule) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&rule)) {
    if (!(fixed->h > 0.0) || !std::isfinite(fixed->h)) {
      throw error(errc::invalid_scale, "fixed bandwidth must be positive and finite");
    }
    check_sample(sample);
    return fixed->h;
  }
  return silverman_bandwidth(sample);
}

DensityGrid kde_fit_grid(std::span<const double> sample, const KdeConfig& cfg) {
  validate(cfg);
  const double h = resolve_bandwidth(sample, cfg.bandwidth_rule);

  const auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *mn - cfg.padding_bandwidths * h;
  const double hi = *mx + cfg.padding_bandwidths * h;
  const std::size_t g = cfg.grid_size;
  const double step = (hi - lo) / static_cast<double>(g - 1);

  // Linear binning: each point splits unit mass between its two bracketing
  // grid knots, preserving total mass exactly.
  std::vector<double> counts(g, 0.0);
  for (double x : sample) {
    double pos = (x - lo) / step;
    pos = std::clamp(pos, 0.0, static_cast<double>(g - 1));
    std::size_t j = static_cast<std::size_t>(pos);
    if (j >= g - 1) {
      j = g - 2;
    }
    const double frac = pos - static_cast<double>(j);
    counts[j] += 1.0 - frac;
    counts[j + 1] += frac;
  }

  // Kernel values at knot distances; identical for every pair at the same
  // lag because the grid is equally spaced.
  std::size_t reach = g;
  std::vector<double> kernel(g, 0.0);
  for (std::size_t k = 0; k < g; ++k) {
    const double z = static_cast<double>(k) * step / h;
    if (z > kKernelReachSds) {
      reach = k;
      break;
    }
    kernel[k] = std::exp(-0.5 * z * z);
  }

  std::vector<double> ordinates(g, 0.0);
  for (std::size_t j = 0; j < g; ++j) {
    const double c = counts[j];
    if (c == 0.0) {
      continue;
    }
    const std::size_t first = j >= reach - 1 ? j - (reach - 1) : 0;
    const std::size_t last = std::min(g - 1, j + (reach - 1));
    for (std::size_t i = first; i <= last; ++i) {
      const std::size_t lag = i > j ? i - j : j - i;
      ordinates[i] += c * kernel[lag];
    }
  }
  const double norm = kInvSqrt2Pi / (static_cast<double>(sample.size()) * h);
  for (double& y : ordinates) {
    y *= norm;
  }

  std::vector<double> abscissae(g);
  for (std::size_t i = 0; i < g; ++i) {
    abscissae[i] = lo + static_cast<double>(i) * step;
  }
  return DensityGrid{std::move(abscissae), std::move(ordinates), h};
}

double kde_eval_direct(std::span<const double> sample, double h, double theta) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw error(errc::invalid_scale, "bandwidth must be positive and finite");
  }
  double s = 0.0;
  for (double x : sample) {
    const double z = (theta - x) / h;
    s += std::exp(-0.5 * z * z);
  }
  return s * kInvSqrt2Pi / (static_cast<double>(sample.size()) * h);
}

double interp_linear(const DensityGrid& grid, double theta) {
  const auto& xs = grid.abscissae;
  const auto& ys = grid.ordinates;
  if (!(theta >= xs.front() && theta <= xs.back())) {
    throw error(errc::out_of_grid_range, "theta = " + std::to_string(theta) +
                                             " is outside the grid [" +
                                             std::to_string(xs.front()) + ", " +
                                             std::to_string(xs.back()) + "]");
  }
  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  std::size_t j = static_cast<std::size_t>((theta - xs.front()) / step);
  if (j >= xs.size() - 1) {
    j = xs.size() - 2;
  }
  if (theta == xs[j]) {
    return ys[j];
  }
  if (theta == xs[j + 1]) {
    return ys[j + 1];
  }
  const double t = (theta - xs[j]) / (xs[j + 1] - xs[j]);
  return ys[j] + t * (ys[j + 1] - ys[j]);
}

double trapezoid_integral(const DensityGrid& grid) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.abscissae.size(); ++i) {
    total += 0.5 * (grid.ordinates[i] + grid.ordinates[i + 1]) *
             (grid.abscissae[i + 1] - grid.abscissae[i]);
  }
  return total;
}

void write_grid_csv(const DensityGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  out << "x,density\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.abscissae.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", grid.abscissae[i], grid.ordinates[i]);
    out << buf;
  }
  if (!out) {
    throw error(errc::io_error, "write to '" + path + "' failed");
  }
}

}  // namespace marglik
