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

#include "model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace marglik {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

}  // namespace

Dataset dataset_from_values(std::span<const double> values) {
  if (values.empty()) {
    throw error(errc::empty_dataset, "dataset requires at least one observation");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw error(errc::invalid_observation,
                  "observation " + std::to_string(i) + " is not finite");
    }
    sum += values[i];
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return Dataset{std::vector<double>(values.begin(), values.end()), mean, ss / n};
}

void validate(const NormalModelConfig& config) {
  if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) {
    throw error(errc::invalid_scale, "sigma must be positive and finite");
  }
  if (!(config.sigma0 > 0.0) || !std::isfinite(config.sigma0)) {
    throw error(errc::invalid_scale, "sigma0 must be positive and finite");
  }
  if (!std::isfinite(config.theta0)) {
    throw error(errc::invalid_argument, "theta0 must be finite");
  }
}

double normal_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * kLog2Pi - std::log(sd) - 0.5 * z * z;
}

double normal_log_likelihood(const Dataset& data, const NormalModelConfig& config,
                             double theta) {
  validate(config);
  const double n = static_cast<double>(data.n());
  const double d = theta - data.mean;
  return -0.5 * n * kLog2Pi - n * std::log(config.sigma) -
         n / (2.0 * config.sigma * config.sigma) * (d * d + data.pop_variance);
}

double normal_log_prior(double theta, const NormalModelConfig& config) {
  validate(config);
  return normal_log_pdf(theta, config.theta0, config.sigma0);
}

PosteriorParams normal_posterior_params(const Dataset& data, const NormalModelConfig& config) {
  validate(config);
  const double n = static_cast<double>(data.n());
  const double s2 = config.sigma * config.sigma;
  const double s02 = config.sigma0 * config.sigma0;
  const double denom = n * s02 + s2;
  return PosteriorParams{(n * s02 * data.mean + s2 * config.theta0) / denom,
                         s2 * s02 / denom};
}

double posterior_log_pdf(const PosteriorParams& params, double theta) {
  if (!(params.variance > 0.0)) {
    throw error(errc::invalid_scale, "posterior variance must be positive");
  }
  return normal_log_pdf(theta, params.mean, std::sqrt(params.variance));
}

double normal_log_marginal_closed_form(const Dataset& data, const NormalModelConfig& config) {
  validate(config);
  const double n = static_cast<double>(data.n());
  const double s2 = config.sigma * config.sigma;
  const double s02 = config.sigma0 * config.sigma0;
  const double denom = n * s02 + s2;
  const double a = n * s02 * data.mean + s2 * config.theta0;
  const double quad = n * data.pop_variance / s2 - a * a / (s2 * s02 * denom) +
                      (n * s02 * data.mean * data.mean + s2 * config.theta0 * config.theta0) /
                          (s2 * s02);
  return -0.5 * n * kLog2Pi + (1.0 - n) * std::log(config.sigma) - 0.5 * std::log(denom) -
         0.5 * quad;
}

BayesModelSpec make_normal_model(const NormalModelConfig& config) {
  validate(config);
  return BayesModelSpec{
      [config](double theta, const Dataset& data) {
        return normal_log_likelihood(data, config, theta);
      },
      [config](double theta) { return normal_log_prior(theta, config); },
  };
}

}  // namespace marglik
