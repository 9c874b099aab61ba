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

#include "sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace marglik {

double RngStream::next_uniform() {
  // 53-bit mantissa, offset by half a step so the value is strictly inside
  // (0, 1) and log() of it is always finite.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PosteriorSample make_posterior_sample(std::vector<double> draws, Provenance provenance) {
  if (draws.size() < 2) {
    throw error(errc::sample_too_small, "posterior sample requires at least 2 draws, got " +
                                            std::to_string(draws.size()));
  }
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (!std::isfinite(draws[i])) {
      throw error(errc::invalid_observation, "draw " + std::to_string(i) + " is not finite");
    }
  }
  return PosteriorSample{std::move(draws), provenance};
}

void validate(const MhConfig& cfg) {
  if (!(cfg.proposal_sd > 0.0) || !std::isfinite(cfg.proposal_sd)) {
    throw error(errc::invalid_scale, "proposal_sd must be positive and finite");
  }
  if (cfg.thinning < 1) {
    throw error(errc::invalid_argument, "thinning must be >= 1");
  }
  if (cfg.chain_length < 2) {
    throw error(errc::invalid_argument, "chain_length must be >= 2");
  }
  if (!std::isfinite(cfg.initial_theta)) {
    throw error(errc::invalid_argument, "initial_theta must be finite");
  }
}

MhConfig default_mh_config(double scale_estimate, double initial_theta,
                           std::size_t chain_length) {
  if (!(scale_estimate > 0.0) || !std::isfinite(scale_estimate)) {
    throw error(errc::invalid_scale, "scale_estimate must be positive and finite");
  }
  return MhConfig{2.4 * scale_estimate, 1000, 1, chain_length, initial_theta};
}

std::vector<double> sample_normal(RngStream& rng, double mean, double sd, std::size_t count) {
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw error(errc::invalid_scale, "sd must be positive and finite");
  }
  if (!std::isfinite(mean)) {
    throw error(errc::invalid_argument, "mean must be finite");
  }
  if (count < 1) {
    throw error(errc::invalid_argument, "count must be >= 1");
  }
  std::vector<double> out(count);
  for (double& v : out) {
    v = mean + sd * rng.next_normal();
  }
  return out;
}

PosteriorSample sample_exact_posterior(RngStream& rng, const PosteriorParams& params,
                                       std::size_t n_draws) {
  if (n_draws < 2) {
    throw error(errc::sample_too_small,
                "n_draws must be >= 2, got " + std::to_string(n_draws));
  }
  if (!(params.variance > 0.0) || !std::isfinite(params.variance)) {
    throw error(errc::invalid_scale, "posterior variance must be positive and finite");
  }
  return PosteriorSample{sample_normal(rng, params.mean, std::sqrt(params.variance), n_draws),
                         ExactIid{}};
}

PosteriorSample metropolis_sample_target(RngStream& rng,
                                         const std::function<double(double)>& log_target,
                                         const MhConfig& cfg) {
  validate(cfg);
  const std::size_t kept_target =
      cfg.chain_length > cfg.burn_in ? (cfg.chain_length - cfg.burn_in) / cfg.thinning : 0;
  if (kept_target < 2) {
    throw error(errc::sample_too_small,
                "chain yields " + std::to_string(kept_target) +
                    " retained draws; need at least 2 (chain_length " +
                    std::to_string(cfg.chain_length) + ", burn_in " +
                    std::to_string(cfg.burn_in) + ", thinning " +
                    std::to_string(cfg.thinning) + ")");
  }

  double theta = cfg.initial_theta;
  double log_t = log_target(theta);
  if (!std::isfinite(log_t)) {
    throw error(errc::bad_initialization,
                "log target is not finite at initial_theta = " + std::to_string(theta));
  }

  std::vector<double> kept;
  kept.reserve(kept_target);
  std::size_t accepted = 0;
  for (std::size_t t = 1; t <= cfg.chain_length; ++t) {
    const double proposal = theta + cfg.proposal_sd * rng.next_normal();
    const double log_t_prop = log_target(proposal);
    if (std::isnan(log_t_prop)) {
      throw error(errc::invalid_argument, "log target returned NaN at theta = " +
                                              std::to_string(proposal));
    }
    // log_t_prop may be -inf, in which case the comparison rejects. The
    // acceptance uniform is drawn unconditionally so each iteration costs a
    // fixed three engine steps.
    const double log_u = std::log(rng.next_uniform());
    if (log_u < log_t_prop - log_t) {
      theta = proposal;
      log_t = log_t_prop;
      ++accepted;
    }
    if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thinning == 0) {
      kept.push_back(theta);
    }
  }

  const double rate = static_cast<double>(accepted) / static_cast<double>(cfg.chain_length);
  return PosteriorSample{std::move(kept), McmcInfo{cfg.burn_in, cfg.thinning, rate}};
}

PosteriorSample metropolis_sample(RngStream& rng, const BayesModelSpec& model,
                                  const Dataset& data, const MhConfig& cfg) {
  return metropolis_sample_target(
      rng,
      [&](double theta) { return model.log_likelihood(theta, data) + model.log_prior(theta); },
      cfg);
}

}  // namespace marglik
