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
#include <functional>
#include <span>
#include <vector>

namespace marglik {

// Observations together with the sufficient statistics the Normal likelihood
// depends on. pop_variance uses divisor n (population form).
struct Dataset {
  std::vector<double> values;
  double mean = 0.0;
  double pop_variance = 0.0;

  std::size_t n() const noexcept { return values.size(); }
};

Dataset dataset_from_values(std::span<const double> values);

// Known-variance Normal observation model with a Normal prior on the mean:
// X_i | theta ~ N(theta, sigma^2), theta ~ N(theta0, sigma0^2).
struct NormalModelConfig {
  double sigma = 1.0;   // observation sd, > 0
  double theta0 = 0.0;  // prior mean
  double sigma0 = 1.0;  // prior sd, > 0
};

void validate(const NormalModelConfig& config);

struct PosteriorParams {
  double mean = 0.0;
  double variance = 1.0;  // > 0
};

// A model is an evaluable log-likelihood / log-prior pair. Both functions
// must be pure and return finite values or -infinity, never NaN. This is the
// extension point for non-conjugate models.
struct BayesModelSpec {
  std::function<double(double theta, const Dataset& data)> log_likelihood;
  std::function<double(double theta)> log_prior;
};

// log N(x; mean, sd^2)
double normal_log_pdf(double x, double mean, double sd);

// Sufficient-statistic form of the joint Normal log-likelihood; equal to the
// sum of per-observation log-densities.
double normal_log_likelihood(const Dataset& data, const NormalModelConfig& config, double theta);

double normal_log_prior(double theta, const NormalModelConfig& config);

PosteriorParams normal_posterior_params(const Dataset& data, const NormalModelConfig& config);

double posterior_log_pdf(const PosteriorParams& params, double theta);

// Closed-form log marginal likelihood of the conjugate model, computed
// entirely in log domain.
double normal_log_marginal_closed_form(const Dataset& data, const NormalModelConfig& config);

BayesModelSpec make_normal_model(const NormalModelConfig& config);

}  // namespace marglik
