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
#include <span>
#include <string>
#include <vector>

#include "kde.hpp"
#include "model.hpp"
#include "sampling.hpp"

namespace marglik {

// A posterior-density evaluation at or below this aborts estimation instead
// of producing a near-infinite weight.
inline constexpr double kDensityFloor = 1e-300;

// Per-draw log weights log w_i = log_likelihood + log_prior - log density.
struct LogWeightSet {
  std::vector<double> log_weights;
  std::size_t n_clamped = 0;  // density-floor interventions; violations abort
};

// Max-shifted log(sum(exp(values))); never overflows for finite inputs.
double log_sum_exp(std::span<const double> values);

LogWeightSet compute_log_weights(const BayesModelSpec& model, const Dataset& data,
                                 const PosteriorSample& sample,
                                 const std::function<double(double)>& density_at);

// Same computation against a pre-combined log numerator (likelihood + prior).
LogWeightSet compute_log_weights_target(const std::function<double(double)>& log_numerator,
                                        const PosteriorSample& sample,
                                        const std::function<double(double)>& density_at);

struct MarginalEstimate {
  double log_evidence = 0.0;
  std::size_t n_samples = 0;
  double log_weight_sd = 0.0;  // divisor N-1
  double log_weight_min = 0.0;
  double log_weight_max = 0.0;
  std::size_t n_clamped = 0;
  std::string config_echo;
};

// log_evidence = log_sum_exp(log_weights) - log N, in draw order with the
// max-shift form; deterministic for identical input.
MarginalEstimate estimate_log_marginal(const LogWeightSet& weights);

// Plug in the exact conjugate posterior density: every weight then equals the
// closed-form log marginal likelihood, which makes this an identity check as
// much as an estimator.
MarginalEstimate estimate_with_true_posterior(const BayesModelSpec& model, const Dataset& data,
                                              const PosteriorSample& sample,
                                              const PosteriorParams& posterior);

// The full pipeline: bandwidth, KDE, weights, estimate. Direct mode evaluates
// the exact kernel sum at each draw; grid-interp fits a binned grid and
// interpolates.
MarginalEstimate estimate_with_kde(const BayesModelSpec& model, const Dataset& data,
                                   const PosteriorSample& sample, const KdeConfig& cfg);

MarginalEstimate estimate_with_kde_target(const std::function<double(double)>& log_numerator,
                                          const PosteriorSample& sample, const KdeConfig& cfg);

// Human-readable provenance string for reports.
std::string describe_sample(const PosteriorSample& sample);

}  // namespace marglik
