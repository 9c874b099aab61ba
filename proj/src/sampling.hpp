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

#include <cstdint>
#include <functional>
#include <random>
#include <variant>
#include <vector>

#include "model.hpp"

namespace marglik {

// Seeded variate stream. The engine is mt19937_64 (bit-exact everywhere by
// the standard) and normal variates come from an explicit Box-Muller
// transform, so the sequence never depends on the standard library's
// distribution internals. An RngStream must not be shared across threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1); one engine step.
  double next_uniform();

  // Standard normal variate; consumes exactly two engine steps.
  double next_normal();

 private:
  std::mt19937_64 engine_;
};

struct ExactIid {};

struct McmcInfo {
  std::size_t burn_in = 0;
  std::size_t thinning = 1;
  double acceptance_rate = 0.0;  // empirical, recorded post-run
};

using Provenance = std::variant<ExactIid, McmcInfo>;

// N >= 2 finite parameter draws plus how they were obtained.
struct PosteriorSample {
  std::vector<double> draws;
  Provenance provenance;

  std::size_t size() const noexcept { return draws.size(); }
};

// Validates the draw-count and finiteness invariants.
PosteriorSample make_posterior_sample(std::vector<double> draws, Provenance provenance);

struct MhConfig {
  double proposal_sd = 1.0;
  std::size_t burn_in = 1000;
  std::size_t thinning = 1;
  std::size_t chain_length = 10000;
  double initial_theta = 0.0;
};

void validate(const MhConfig& cfg);

// Classic 2.4 x scale proposal, conventional burn-in, no thinning.
MhConfig default_mh_config(double scale_estimate, double initial_theta,
                           std::size_t chain_length);

std::vector<double> sample_normal(RngStream& rng, double mean, double sd, std::size_t count);

PosteriorSample sample_exact_posterior(RngStream& rng, const PosteriorParams& params,
                                       std::size_t n_draws);

// Random-walk Metropolis targeting exp(log_likelihood + log_prior). Discards
// burn_in states, keeps every thinning-th of the rest; the returned draw
// count is (chain_length - burn_in) / thinning.
PosteriorSample metropolis_sample(RngStream& rng, const BayesModelSpec& model,
                                  const Dataset& data, const MhConfig& cfg);

// Same sampler against an arbitrary unnormalized log density.
PosteriorSample metropolis_sample_target(RngStream& rng,
                                         const std::function<double(double)>& log_target,
                                         const MhConfig& cfg);

}  // namespace marglik
