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

#include "estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "errors.hpp"

namespace marglik {

namespace {

std::string short_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string describe_kde(const KdeConfig& cfg, double h) {
  std::string rule = std::holds_alternative<SilvermanRule>(cfg.bandwidth_rule)
                         ? "silverman"
                         : "fixed";
  std::string mode = cfg.eval_mode == EvalMode::kDirect ? "direct" : "grid-interp";
  std::string echo = "kde(rule=" + rule + " h=" + short_double(h) + " mode=" + mode;
  if (cfg.eval_mode == EvalMode::kGridInterp) {
    echo += " grid_size=" + std::to_string(cfg.grid_size) +
            " padding=" + short_double(cfg.padding_bandwidths);
  }
  return echo + ")";
}

}  // namespace

std::string describe_sample(const PosteriorSample& sample) {
  if (const auto* info = std::get_if<McmcInfo>(&sample.provenance)) {
    return "sample=mcmc(n=" + std::to_string(sample.size()) +
           " burn_in=" + std::to_string(info->burn_in) +
           " thinning=" + std::to_string(info->thinning) +
           " acceptance_rate=" + short_double(info->acceptance_rate) + ")";
  }
  return "sample=exact_iid(n=" + std::to_string(sample.size()) + ")";
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw error(errc::empty_input, "log_sum_exp of an empty sequence");
  }
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw error(errc::invalid_argument, "log_sum_exp requires finite inputs");
    }
    m = std::max(m, v);
  }
  double s = 0.0;
  for (double v : values) {
    s += std::exp(v - m);
  }
  return m + std::log(s);
}

LogWeightSet compute_log_weights_target(const std::function<double(double)>& log_numerator,
                                        const PosteriorSample& sample,
                                        const std::function<double(double)>& density_at) {
  if (sample.size() < 2) {
    throw error(errc::sample_too_small, "posterior sample requires at least 2 draws");
  }
  LogWeightSet out;
  out.log_weights.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double theta = sample.draws[i];
    const double density = density_at(theta);
    if (!(density > kDensityFloor)) {
      throw density_floor_violation(
          theta, i,
          "estimated posterior density is " + short_double(density) + " at draw " +
              std::to_string(i) + " (theta = " + short_double(theta) +
              "); the density estimate does not cover the sample support");
    }
    const double numerator = log_numerator(theta);
    if (std::isnan(numerator) || numerator == std::numeric_limits<double>::infinity()) {
      throw error(errc::invalid_argument,
                  "log likelihood + log prior must be finite or -inf, got " +
                      short_double(numerator) + " at theta = " + short_double(theta));
    }
    if (numerator == -std::numeric_limits<double>::infinity()) {
      throw error(errc::invalid_argument,
                  "likelihood x prior vanishes at draw " + std::to_string(i) + " (theta = " +
                      short_double(theta) + "); the draw is outside the model support");
    }
    out.log_weights.push_back(numerator - std::log(density));
  }
  return out;
}

LogWeightSet compute_log_weights(const BayesModelSpec& model, const Dataset& data,
                                 const PosteriorSample& sample,
                                 const std::function<double(double)>& density_at) {
  return compute_log_weights_target(
      [&](double theta) { return model.log_likelihood(theta, data) + model.log_prior(theta); },
      sample, density_at);
}

MarginalEstimate estimate_log_marginal(const LogWeightSet& weights) {
  const auto& w = weights.log_weights;
  if (w.size() < 2) {
    throw error(errc::sample_too_small, "need at least 2 log weights");
  }
  MarginalEstimate est;
  est.n_samples = w.size();
  est.n_clamped = weights.n_clamped;
  est.log_evidence = log_sum_exp(w) - std::log(static_cast<double>(w.size()));

  const auto [mn, mx] = std::minmax_element(w.begin(), w.end());
  est.log_weight_min = *mn;
  est.log_weight_max = *mx;
  double mean = 0.0;
  for (double v : w) {
    mean += v;
  }
  mean /= static_cast<double>(w.size());
  double ss = 0.0;
  for (double v : w) {
    const double d = v - mean;
    ss += d * d;
  }
  est.log_weight_sd = std::sqrt(ss / static_cast<double>(w.size() - 1));
  return est;
}

MarginalEstimate estimate_with_true_posterior(const BayesModelSpec& model, const Dataset& data,
                                              const PosteriorSample& sample,
                                              const PosteriorParams& posterior) {
  if (!(posterior.variance > 0.0) || !std::isfinite(posterior.variance)) {
    throw error(errc::invalid_scale, "posterior variance must be positive and finite");
  }
  auto weights = compute_log_weights(model, data, sample, [&](double theta) {
    return std::exp(posterior_log_pdf(posterior, theta));
  });
  MarginalEstimate est = estimate_log_marginal(weights);
  est.config_echo = describe_sample(sample) + " density=exact_posterior(mean=" +
                    short_double(posterior.mean) +
                    " variance=" + short_double(posterior.variance) + ")";
  return est;
}

MarginalEstimate estimate_with_kde_target(const std::function<double(double)>& log_numerator,
                                          const PosteriorSample& sample, const KdeConfig& cfg) {
  validate(cfg);
  const double h = resolve_bandwidth(sample.draws, cfg.bandwidth_rule);

  LogWeightSet weights;
  if (cfg.eval_mode == EvalMode::kGridInterp) {
    KdeConfig fit_cfg = cfg;
    fit_cfg.bandwidth_rule = FixedBandwidth{h};
    const DensityGrid grid = kde_fit_grid(sample.draws, fit_cfg);
    weights = compute_log_weights_target(
        log_numerator, sample, [&](double theta) { return interp_linear(grid, theta); });
  } else {
    weights = compute_log_weights_target(log_numerator, sample, [&](double theta) {
      return kde_eval_direct(sample.draws, h, theta);
    });
  }
  MarginalEstimate est = estimate_log_marginal(weights);
  est.config_echo = describe_sample(sample) + " " + describe_kde(cfg, h);
  return est;
}

MarginalEstimate estimate_with_kde(const BayesModelSpec& model, const Dataset& data,
                                   const PosteriorSample& sample, const KdeConfig& cfg) {
  return estimate_with_kde_target(
      [&](double theta) { return model.log_likelihood(theta, data) + model.log_prior(theta); },
      sample, cfg);
}

}  // namespace marglik
