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

#include "marglik.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "estimator.hpp"
#include "kde.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "sample_io.hpp"
#include "sampling.hpp"

struct ml_dataset {
  marglik::Dataset impl;
};

struct ml_rng {
  marglik::RngStream impl;
};

struct ml_sample {
  marglik::PosteriorSample impl;
};

struct ml_grid {
  marglik::DensityGrid impl;
};

struct ml_estimate {
  marglik::MarginalEstimate impl;
};

namespace {

thread_local std::string t_last_error;

ml_status map_code(marglik::errc code) {
  using marglik::errc;
  switch (code) {
    case errc::ok:
      return ML_OK;
    case errc::invalid_argument:
      return ML_E_INVALID_ARGUMENT;
    case errc::empty_dataset:
      return ML_E_EMPTY_DATASET;
    case errc::invalid_observation:
      return ML_E_INVALID_OBSERVATION;
    case errc::invalid_scale:
      return ML_E_INVALID_SCALE;
    case errc::sample_too_small:
      return ML_E_SAMPLE_TOO_SMALL;
    case errc::bad_initialization:
      return ML_E_BAD_INITIALIZATION;
    case errc::degenerate_sample:
      return ML_E_DEGENERATE_SAMPLE;
    case errc::out_of_grid_range:
      return ML_E_OUT_OF_GRID_RANGE;
    case errc::density_floor:
      return ML_E_DENSITY_FLOOR;
    case errc::empty_support:
      return ML_E_EMPTY_SUPPORT;
    case errc::tolerance_not_met:
      return ML_E_TOLERANCE_NOT_MET;
    case errc::empty_input:
      return ML_E_EMPTY_INPUT;
    case errc::io_error:
      return ML_E_IO;
    case errc::parse_error:
      return ML_E_PARSE;
  }
  return ML_E_INTERNAL;
}

ml_status fail(ml_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes and the thread-local
// error message.
template <typename Body>
ml_status guarded(Body&& body) {
  try {
    body();
    return ML_OK;
  } catch (const marglik::error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ML_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ML_E_INTERNAL, e.what());
  }
}

ml_status require(bool ok, const char* what) {
  return ok ? ML_OK : fail(ML_E_INVALID_ARGUMENT, what);
}

marglik::NormalModelConfig to_config(const ml_normal_model& model) {
  return marglik::NormalModelConfig{model.sigma, model.theta0, model.sigma0};
}

marglik::KdeConfig to_config(const ml_kde_config& cfg) {
  marglik::KdeConfig out;
  if (cfg.bandwidth_rule == ML_BW_FIXED) {
    out.bandwidth_rule = marglik::FixedBandwidth{cfg.fixed_bandwidth};
  } else {
    out.bandwidth_rule = marglik::SilvermanRule{};
  }
  out.grid_size = cfg.grid_size;
  out.padding_bandwidths = cfg.padding_bandwidths;
  out.eval_mode =
      cfg.eval_mode == ML_EVAL_GRID_INTERP ? marglik::EvalMode::kGridInterp
                                           : marglik::EvalMode::kDirect;
  return out;
}

marglik::MhConfig to_config(const ml_mh_config& cfg) {
  return marglik::MhConfig{cfg.proposal_sd, cfg.burn_in, cfg.thinning, cfg.chain_length,
                           cfg.initial_theta};
}

marglik::QuadratureConfig to_config(const ml_quadrature_config& cfg) {
  return marglik::QuadratureConfig{cfg.center, cfg.half_width_sds, cfg.scale, cfg.abs_tol,
                                   cfg.max_depth};
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* ml_status_name(ml_status status) {
  switch (status) {
    case ML_OK:
      return "OK";
    case ML_E_INVALID_ARGUMENT:
      return "E_INVALID_ARGUMENT";
    case ML_E_EMPTY_DATASET:
      return "E_EMPTY_DATASET";
    case ML_E_INVALID_OBSERVATION:
      return "E_INVALID_OBSERVATION";
    case ML_E_INVALID_SCALE:
      return "E_INVALID_SCALE";
    case ML_E_SAMPLE_TOO_SMALL:
      return "E_SAMPLE_TOO_SMALL";
    case ML_E_BAD_INITIALIZATION:
      return "E_BAD_INITIALIZATION";
    case ML_E_DEGENERATE_SAMPLE:
      return "E_DEGENERATE_SAMPLE";
    case ML_E_OUT_OF_GRID_RANGE:
      return "E_OUT_OF_GRID_RANGE";
    case ML_E_DENSITY_FLOOR:
      return "E_DENSITY_FLOOR";
    case ML_E_EMPTY_SUPPORT:
      return "E_EMPTY_SUPPORT";
    case ML_E_TOLERANCE_NOT_MET:
      return "E_TOLERANCE_NOT_MET";
    case ML_E_EMPTY_INPUT:
      return "E_EMPTY_INPUT";
    case ML_E_IO:
      return "E_IO";
    case ML_E_PARSE:
      return "E_PARSE";
    case ML_E_INTERNAL:
      return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

const char* ml_last_error(void) { return t_last_error.c_str(); }

const char* ml_version(void) { return "0.1.0"; }

/* ---- datasets --------------------------------------------------------- */

ml_status ml_dataset_create(const double* values, size_t n, ml_dataset** out) {
  if (auto st = require(out != nullptr, "out must not be NULL")) return st;
  if (auto st = require(values != nullptr || n == 0, "values must not be NULL")) return st;
  return guarded([&] {
    auto data = marglik::dataset_from_values(std::span<const double>(values, n));
    *out = new ml_dataset{std::move(data)};
  });
}

ml_status ml_dataset_read(const char* path, ml_dataset** out) {
  if (auto st = require(out != nullptr && path != nullptr, "path and out must not be NULL"))
    return st;
  return guarded([&] {
    auto values = marglik::read_values_file(path);
    auto data = marglik::dataset_from_values(values);
    *out = new ml_dataset{std::move(data)};
  });
}

void ml_dataset_free(ml_dataset* dataset) { delete dataset; }

size_t ml_dataset_size(const ml_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->impl.n();
}

double ml_dataset_mean(const ml_dataset* dataset) {
  return dataset == nullptr ? kNan : dataset->impl.mean;
}

double ml_dataset_pop_variance(const ml_dataset* dataset) {
  return dataset == nullptr ? kNan : dataset->impl.pop_variance;
}

const double* ml_dataset_values(const ml_dataset* dataset) {
  return dataset == nullptr ? nullptr : dataset->impl.values.data();
}

/* ---- Normal-Normal conjugate model ------------------------------------ */

ml_status ml_normal_log_likelihood(const ml_dataset* dataset, const ml_normal_model* model,
                                   double theta, double* out) {
  if (auto st = require(dataset != nullptr && model != nullptr && out != nullptr,
                        "dataset, model and out must not be NULL"))
    return st;
  return guarded([&] {
    *out = marglik::normal_log_likelihood(dataset->impl, to_config(*model), theta);
  });
}

ml_status ml_normal_log_prior(const ml_normal_model* model, double theta, double* out) {
  if (auto st = require(model != nullptr && out != nullptr, "model and out must not be NULL"))
    return st;
  return guarded([&] { *out = marglik::normal_log_prior(theta, to_config(*model)); });
}

ml_status ml_normal_posterior(const ml_dataset* dataset, const ml_normal_model* model,
                              double* mean_out, double* variance_out) {
  if (auto st = require(dataset != nullptr && model != nullptr && mean_out != nullptr &&
                            variance_out != nullptr,
                        "dataset, model and outs must not be NULL"))
    return st;
  return guarded([&] {
    auto params = marglik::normal_posterior_params(dataset->impl, to_config(*model));
    *mean_out = params.mean;
    *variance_out = params.variance;
  });
}

ml_status ml_normal_log_marginal(const ml_dataset* dataset, const ml_normal_model* model,
                                 double* out) {
  if (auto st = require(dataset != nullptr && model != nullptr && out != nullptr,
                        "dataset, model and out must not be NULL"))
    return st;
  return guarded([&] {
    *out = marglik::normal_log_marginal_closed_form(dataset->impl, to_config(*model));
  });
}

/* ---- random number generation and sampling ---------------------------- */

ml_status ml_rng_create(uint64_t seed, ml_rng** out) {
  if (auto st = require(out != nullptr, "out must not be NULL")) return st;
  return guarded([&] { *out = new ml_rng{marglik::RngStream(seed)}; });
}

void ml_rng_free(ml_rng* rng) { delete rng; }

ml_status ml_rng_normal(ml_rng* rng, double mean, double sd, size_t count, double* out) {
  if (auto st = require(rng != nullptr && out != nullptr, "rng and out must not be NULL"))
    return st;
  return guarded([&] {
    auto values = marglik::sample_normal(rng->impl, mean, sd, count);
    std::copy(values.begin(), values.end(), out);
  });
}

ml_status ml_sample_exact_posterior(ml_rng* rng, double post_mean, double post_variance,
                                    size_t n_draws, ml_sample** out) {
  if (auto st = require(rng != nullptr && out != nullptr, "rng and out must not be NULL"))
    return st;
  return guarded([&] {
    auto sample = marglik::sample_exact_posterior(
        rng->impl, marglik::PosteriorParams{post_mean, post_variance}, n_draws);
    *out = new ml_sample{std::move(sample)};
  });
}

ml_mh_config ml_mh_config_default(double scale_estimate, double initial_theta,
                                  size_t chain_length) {
  return ml_mh_config{2.4 * scale_estimate, 1000, 1, chain_length, initial_theta};
}

ml_status ml_sample_metropolis(ml_rng* rng, ml_log_density_fn log_likelihood,
                               void* likelihood_ctx, ml_log_density_fn log_prior,
                               void* prior_ctx, const ml_mh_config* config, ml_sample** out) {
  if (auto st = require(rng != nullptr && log_likelihood != nullptr && log_prior != nullptr &&
                            config != nullptr && out != nullptr,
                        "rng, callbacks, config and out must not be NULL"))
    return st;
  return guarded([&] {
    auto sample = marglik::metropolis_sample_target(
        rng->impl,
        [&](double theta) {
          return log_likelihood(theta, likelihood_ctx) + log_prior(theta, prior_ctx);
        },
        to_config(*config));
    *out = new ml_sample{std::move(sample)};
  });
}

ml_status ml_sample_metropolis_normal(ml_rng* rng, const ml_dataset* dataset,
                                      const ml_normal_model* model, const ml_mh_config* config,
                                      ml_sample** out) {
  if (auto st = require(rng != nullptr && dataset != nullptr && model != nullptr &&
                            config != nullptr && out != nullptr,
                        "rng, dataset, model, config and out must not be NULL"))
    return st;
  return guarded([&] {
    auto spec = marglik::make_normal_model(to_config(*model));
    auto sample =
        marglik::metropolis_sample(rng->impl, spec, dataset->impl, to_config(*config));
    *out = new ml_sample{std::move(sample)};
  });
}

ml_status ml_sample_create(const double* draws, size_t n, ml_sample** out) {
  if (auto st = require(out != nullptr, "out must not be NULL")) return st;
  if (auto st = require(draws != nullptr || n == 0, "draws must not be NULL")) return st;
  return guarded([&] {
    auto sample = marglik::make_posterior_sample(std::vector<double>(draws, draws + n),
                                                 marglik::ExactIid{});
    *out = new ml_sample{std::move(sample)};
  });
}

ml_status ml_sample_read(const char* path, ml_sample** out) {
  if (auto st = require(path != nullptr && out != nullptr, "path and out must not be NULL"))
    return st;
  return guarded([&] {
    auto sample = marglik::read_sample_file(path);
    *out = new ml_sample{std::move(sample)};
  });
}

ml_status ml_sample_write(const ml_sample* sample, const char* path) {
  if (auto st = require(sample != nullptr && path != nullptr,
                        "sample and path must not be NULL"))
    return st;
  return guarded([&] { marglik::write_sample_file(path, sample->impl); });
}

void ml_sample_free(ml_sample* sample) { delete sample; }

size_t ml_sample_size(const ml_sample* sample) {
  return sample == nullptr ? 0 : sample->impl.size();
}

const double* ml_sample_draws(const ml_sample* sample) {
  return sample == nullptr ? nullptr : sample->impl.draws.data();
}

int ml_sample_is_mcmc(const ml_sample* sample) {
  return sample != nullptr && std::holds_alternative<marglik::McmcInfo>(sample->impl.provenance)
             ? 1
             : 0;
}

ml_status ml_sample_mcmc_info(const ml_sample* sample, size_t* burn_in_out,
                              size_t* thinning_out, double* acceptance_rate_out) {
  if (auto st = require(sample != nullptr, "sample must not be NULL")) return st;
  const auto* info = std::get_if<marglik::McmcInfo>(&sample->impl.provenance);
  if (info == nullptr) {
    return fail(ML_E_INVALID_ARGUMENT, "sample does not have MCMC provenance");
  }
  if (burn_in_out != nullptr) *burn_in_out = info->burn_in;
  if (thinning_out != nullptr) *thinning_out = info->thinning;
  if (acceptance_rate_out != nullptr) *acceptance_rate_out = info->acceptance_rate;
  return ML_OK;
}

/* ---- kernel density estimation ----------------------------------------- */

ml_kde_config ml_kde_config_default(void) {
  return ml_kde_config{ML_BW_SILVERMAN, 0.0, 401, 6.0, ML_EVAL_DIRECT};
}

ml_status ml_silverman_bandwidth(const double* sample, size_t n, double* out) {
  if (auto st = require(sample != nullptr && out != nullptr,
                        "sample and out must not be NULL"))
    return st;
  return guarded(
      [&] { *out = marglik::silverman_bandwidth(std::span<const double>(sample, n)); });
}

ml_status ml_kde_fit(const ml_sample* sample, const ml_kde_config* config, ml_grid** out) {
  if (auto st = require(sample != nullptr && config != nullptr && out != nullptr,
                        "sample, config and out must not be NULL"))
    return st;
  return guarded([&] {
    auto grid = marglik::kde_fit_grid(sample->impl.draws, to_config(*config));
    *out = new ml_grid{std::move(grid)};
  });
}

ml_status ml_kde_eval_direct(const ml_sample* sample, double bandwidth, double theta,
                             double* out) {
  if (auto st = require(sample != nullptr && out != nullptr,
                        "sample and out must not be NULL"))
    return st;
  return guarded(
      [&] { *out = marglik::kde_eval_direct(sample->impl.draws, bandwidth, theta); });
}

ml_status ml_grid_interp(const ml_grid* grid, double theta, double* out) {
  if (auto st = require(grid != nullptr && out != nullptr, "grid and out must not be NULL"))
    return st;
  return guarded([&] { *out = marglik::interp_linear(grid->impl, theta); });
}

size_t ml_grid_size(const ml_grid* grid) {
  return grid == nullptr ? 0 : grid->impl.abscissae.size();
}

double ml_grid_bandwidth(const ml_grid* grid) {
  return grid == nullptr ? kNan : grid->impl.bandwidth;
}

const double* ml_grid_abscissae(const ml_grid* grid) {
  return grid == nullptr ? nullptr : grid->impl.abscissae.data();
}

const double* ml_grid_ordinates(const ml_grid* grid) {
  return grid == nullptr ? nullptr : grid->impl.ordinates.data();
}

ml_status ml_grid_write_csv(const ml_grid* grid, const char* path) {
  if (auto st = require(grid != nullptr && path != nullptr, "grid and path must not be NULL"))
    return st;
  return guarded([&] { marglik::write_grid_csv(grid->impl, path); });
}

void ml_grid_free(ml_grid* grid) { delete grid; }

/* ---- evidence estimation ------------------------------------------------ */

ml_status ml_log_sum_exp(const double* values, size_t n, double* out) {
  if (auto st = require(values != nullptr || n == 0, "values must not be NULL")) return st;
  if (auto st = require(out != nullptr, "out must not be NULL")) return st;
  return guarded([&] { *out = marglik::log_sum_exp(std::span<const double>(values, n)); });
}

ml_status ml_estimate_kde(const ml_dataset* dataset, const ml_normal_model* model,
                          const ml_sample* sample, const ml_kde_config* kde_config,
                          ml_estimate** out) {
  if (auto st = require(dataset != nullptr && model != nullptr && sample != nullptr &&
                            kde_config != nullptr && out != nullptr,
                        "dataset, model, sample, config and out must not be NULL"))
    return st;
  return guarded([&] {
    auto spec = marglik::make_normal_model(to_config(*model));
    auto est = marglik::estimate_with_kde(spec, dataset->impl, sample->impl,
                                          to_config(*kde_config));
    est.config_echo += " model=normal(sigma=" + std::to_string(model->sigma) +
                       " theta0=" + std::to_string(model->theta0) +
                       " sigma0=" + std::to_string(model->sigma0) + ")";
    *out = new ml_estimate{std::move(est)};
  });
}

ml_status ml_estimate_kde_custom(ml_log_density_fn log_likelihood, void* likelihood_ctx,
                                 ml_log_density_fn log_prior, void* prior_ctx,
                                 const ml_sample* sample, const ml_kde_config* kde_config,
                                 ml_estimate** out) {
  if (auto st = require(log_likelihood != nullptr && log_prior != nullptr &&
                            sample != nullptr && kde_config != nullptr && out != nullptr,
                        "callbacks, sample, config and out must not be NULL"))
    return st;
  return guarded([&] {
    auto est = marglik::estimate_with_kde_target(
        [&](double theta) {
          return log_likelihood(theta, likelihood_ctx) + log_prior(theta, prior_ctx);
        },
        sample->impl, to_config(*kde_config));
    est.config_echo += " model=custom";
    *out = new ml_estimate{std::move(est)};
  });
}

ml_status ml_estimate_with_posterior(const ml_dataset* dataset, const ml_normal_model* model,
                                     const ml_sample* sample, double post_mean,
                                     double post_variance, ml_estimate** out) {
  if (auto st = require(dataset != nullptr && model != nullptr && sample != nullptr &&
                            out != nullptr,
                        "dataset, model, sample and out must not be NULL"))
    return st;
  return guarded([&] {
    auto spec = marglik::make_normal_model(to_config(*model));
    auto est = marglik::estimate_with_true_posterior(
        spec, dataset->impl, sample->impl,
        marglik::PosteriorParams{post_mean, post_variance});
    *out = new ml_estimate{std::move(est)};
  });
}

double ml_estimate_log_evidence(const ml_estimate* estimate) {
  return estimate == nullptr ? kNan : estimate->impl.log_evidence;
}

size_t ml_estimate_n_samples(const ml_estimate* estimate) {
  return estimate == nullptr ? 0 : estimate->impl.n_samples;
}

double ml_estimate_log_weight_sd(const ml_estimate* estimate) {
  return estimate == nullptr ? kNan : estimate->impl.log_weight_sd;
}

double ml_estimate_log_weight_min(const ml_estimate* estimate) {
  return estimate == nullptr ? kNan : estimate->impl.log_weight_min;
}

double ml_estimate_log_weight_max(const ml_estimate* estimate) {
  return estimate == nullptr ? kNan : estimate->impl.log_weight_max;
}

size_t ml_estimate_n_clamped(const ml_estimate* estimate) {
  return estimate == nullptr ? 0 : estimate->impl.n_clamped;
}

const char* ml_estimate_config_echo(const ml_estimate* estimate) {
  return estimate == nullptr ? "" : estimate->impl.config_echo.c_str();
}

void ml_estimate_free(ml_estimate* estimate) { delete estimate; }

/* ---- quadrature oracle -------------------------------------------------- */

ml_status ml_quadrature_config_default(const ml_dataset* dataset, const ml_normal_model* model,
                                       int use_posterior_hint, ml_quadrature_config* out) {
  if (auto st = require(model != nullptr && out != nullptr, "model and out must not be NULL"))
    return st;
  if (auto st = require(dataset != nullptr || use_posterior_hint == 0,
                        "dataset must not be NULL when use_posterior_hint is set"))
    return st;
  return guarded([&] {
    std::optional<marglik::PosteriorParams> hint;
    if (use_posterior_hint != 0) {
      hint = marglik::normal_posterior_params(dataset->impl, to_config(*model));
    }
    auto cfg = marglik::default_quadrature_config(hint, to_config(*model));
    *out = ml_quadrature_config{cfg.center, cfg.half_width_sds, cfg.scale, cfg.abs_tol,
                                cfg.max_depth};
  });
}

ml_status ml_quadrature_log_marginal(const ml_dataset* dataset, const ml_normal_model* model,
                                     const ml_quadrature_config* config, double* out) {
  if (auto st = require(dataset != nullptr && model != nullptr && config != nullptr &&
                            out != nullptr,
                        "dataset, model, config and out must not be NULL"))
    return st;
  try {
    auto spec = marglik::make_normal_model(to_config(*model));
    *out = marglik::quadrature_log_marginal(spec, dataset->impl, to_config(*config));
    return ML_OK;
  } catch (const marglik::tolerance_not_met& e) {
    *out = e.best_value();
    return fail(ML_E_TOLERANCE_NOT_MET, e.what());
  } catch (const marglik::error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(ML_E_INTERNAL, e.what());
  }
}

ml_status ml_quadrature_log_integral(ml_log_density_fn log_integrand, void* ctx,
                                     const ml_quadrature_config* config, double* out) {
  if (auto st = require(log_integrand != nullptr && config != nullptr && out != nullptr,
                        "integrand, config and out must not be NULL"))
    return st;
  try {
    *out = marglik::quadrature_log_integral(
        [&](double theta) { return log_integrand(theta, ctx); }, to_config(*config));
    return ML_OK;
  } catch (const marglik::tolerance_not_met& e) {
    *out = e.best_value();
    return fail(ML_E_TOLERANCE_NOT_MET, e.what());
  } catch (const marglik::error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(ML_E_INTERNAL, e.what());
  }
}

} /* extern "C" */
