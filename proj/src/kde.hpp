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
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace marglik {

struct SilvermanRule {};

struct FixedBandwidth {
  double h = 1.0;  // > 0
};

using BandwidthRule = std::variant<SilvermanRule, FixedBandwidth>;

enum class EvalMode { kDirect, kGridInterp };

struct KdeConfig {
  BandwidthRule bandwidth_rule = SilvermanRule{};
  std::size_t grid_size = 401;
  double padding_bandwidths = 6.0;
  EvalMode eval_mode = EvalMode::kDirect;
};

void validate(const KdeConfig& cfg);

// Gaussian KDE fitted on an equally spaced grid. Immutable once built; safe
// for shared concurrent reads.
struct DensityGrid {
  std::vector<double> abscissae;  // strictly increasing, equally spaced
  std::vector<double> ordinates;  // >= 0
  double bandwidth = 0.0;         // > 0
};

// 0.9 * min(sd, IQR/1.349) * N^(-1/5), sd with divisor N-1, quantiles by
// linear interpolation at index q*(N-1). Rejects samples whose sd or IQR is
// zero; use a fixed bandwidth for those.
double silverman_bandwidth(std::span<const double> sample);

double resolve_bandwidth(std::span<const double> sample, const BandwidthRule& rule);

// Linear binning of the sample onto the grid followed by direct convolution
// with the Gaussian kernel. The grid spans the sample range padded by
// padding_bandwidths * h on each side.
DensityGrid kde_fit_grid(std::span<const double> sample, const KdeConfig& cfg);

// Exact kernel sum (1/(N h)) sum_i phi((theta - x_i)/h); no binning.
double kde_eval_direct(std::span<const double> sample, double h, double theta);

// Linear interpolation between the bracketing grid points; theta outside the
// grid is an error rather than zero, so a support mismatch cannot silently
// explode a downstream reciprocal.
double interp_linear(const DensityGrid& grid, double theta);

double trapezoid_integral(const DensityGrid& grid);

// CSV with header "x,density", one grid point per row, 17 significant digits.
void write_grid_csv(const DensityGrid& grid, const std::string& path);

}  // namespace marglik
