/* Copyright 2026 the marglik authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MARGLIK_H
#define MARGLIK_H

/* marglik — marginal likelihood (model evidence) estimation from posterior
 * samples.
 *
 * The library estimates log f_X(x) = log integral of likelihood x prior by
 * averaging likelihood x prior / estimated-posterior-density over posterior
 * draws, entirely in log domain. It ships the conjugate Normal-Normal model
 * with its closed-form evidence, exact and Metropolis-Hastings samplers,
 * Gaussian kernel density estimation, and an adaptive-quadrature oracle.
 *
 * Conventions:
 *   - every fallible function returns ml_status; results travel through out
 *     parameters, which are written only on ML_OK unless noted;
 *   - objects created by the library are owned by the caller and released
 *     with the matching ml_*_free (free functions accept NULL);
 *   - ml_last_error() describes the most recent failure on the calling
 *     thread;
 *   - handles are safe to share across threads for reads; ml_rng is the one
 *     stateful object and must be owned by a single thread at a time.
 */

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define ML_API __declspec(dllexport)
#else
#define ML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ml_status {
  ML_OK = 0,
  ML_E_INVALID_ARGUMENT = 1,
  ML_E_EMPTY_DATASET = 2,
  ML_E_INVALID_OBSERVATION = 3,
  ML_E_INVALID_SCALE = 4,
  ML_E_SAMPLE_TOO_SMALL = 5,
  ML_E_BAD_INITIALIZATION = 6,
  ML_E_DEGENERATE_SAMPLE = 7,
  ML_E_OUT_OF_GRID_RANGE = 8,
  ML_E_DENSITY_FLOOR = 9,
  ML_E_EMPTY_SUPPORT = 10,
  ML_E_TOLERANCE_NOT_MET = 11,
  ML_E_EMPTY_INPUT = 12,
  ML_E_IO = 13,
  ML_E_PARSE = 14,
  ML_E_INTERNAL = 15
} ml_status;

/* Canonical name, e.g. "E_DENSITY_FLOOR"; "OK" for ML_OK. */
ML_API const char *ml_status_name(ml_status status);

/* Detail message of the last failure on this thread; valid until the next
 * library call from the same thread. */
ML_API const char *ml_last_error(void);

ML_API const char *ml_version(void);

typedef struct ml_dataset ml_dataset;
typedef struct ml_rng ml_rng;
typedef struct ml_sample ml_sample;
typedef struct ml_grid ml_grid;
typedef struct ml_estimate ml_estimate;

/* ---- datasets --------------------------------------------------------- */

/* Copies n finite values and precomputes mean and population variance
 * (divisor n). n must be >= 1. */
ML_API ml_status ml_dataset_create(const double *values, size_t n, ml_dataset **out);

/* Reads one float per line; '#' lines are comments. */
ML_API ml_status ml_dataset_read(const char *path, ml_dataset **out);

ML_API void ml_dataset_free(ml_dataset *dataset);
ML_API size_t ml_dataset_size(const ml_dataset *dataset);
ML_API double ml_dataset_mean(const ml_dataset *dataset);
ML_API double ml_dataset_pop_variance(const ml_dataset *dataset);
ML_API const double *ml_dataset_values(const ml_dataset *dataset);

/* ---- Normal-Normal conjugate model ------------------------------------ */

/* X_i | theta ~ N(theta, sigma^2) with theta ~ N(theta0, sigma0^2). */
typedef struct ml_normal_model {
  double sigma;  /* observation sd, > 0 */
  double theta0; /* prior mean */
  double sigma0; /* prior sd, > 0 */
} ml_normal_model;

ML_API ml_status ml_normal_log_likelihood(const ml_dataset *dataset,
                                          const ml_normal_model *model, double theta,
                                          double *out);
ML_API ml_status ml_normal_log_prior(const ml_normal_model *model, double theta, double *out);
ML_API ml_status ml_normal_posterior(const ml_dataset *dataset, const ml_normal_model *model,
                                     double *mean_out, double *variance_out);

/* Closed-form log marginal likelihood, computed in log domain. */
ML_API ml_status ml_normal_log_marginal(const ml_dataset *dataset,
                                        const ml_normal_model *model, double *out);

/* Custom models enter through log-density callbacks. Return a finite value
 * or -INFINITY (zero density), never NaN; ctx is passed through untouched. */
typedef double (*ml_log_density_fn)(double theta, void *ctx);

/* ---- random number generation and sampling ---------------------------- */

/* Deterministic stream: a given seed yields the same variates on every build
 * of the library against the same libm. */
ML_API ml_status ml_rng_create(uint64_t seed, ml_rng **out);
ML_API void ml_rng_free(ml_rng *rng);

/* Fills out[0..count) with iid N(mean, sd^2) draws; count >= 1, sd > 0. */
ML_API ml_status ml_rng_normal(ml_rng *rng, double mean, double sd, size_t count, double *out);

/* n_draws >= 2 iid draws from N(post_mean, post_variance). */
ML_API ml_status ml_sample_exact_posterior(ml_rng *rng, double post_mean, double post_variance,
                                           size_t n_draws, ml_sample **out);

typedef struct ml_mh_config {
  double proposal_sd;  /* > 0 */
  size_t burn_in;      /* discarded leading states */
  size_t thinning;     /* keep every thinning-th state, >= 1 */
  size_t chain_length; /* total iterations, >= 2 */
  double initial_theta;
} ml_mh_config;

/* 2.4 x scale proposal, burn_in 1000, thinning 1. */
ML_API ml_mh_config ml_mh_config_default(double scale_estimate, double initial_theta,
                                         size_t chain_length);

/* Random-walk Metropolis targeting exp(log_likelihood + log_prior). The
 * retained draw count is (chain_length - burn_in) / thinning and must be at
 * least 2; the empirical acceptance rate is recorded on the sample. */
ML_API ml_status ml_sample_metropolis(ml_rng *rng, ml_log_density_fn log_likelihood,
                                      void *likelihood_ctx, ml_log_density_fn log_prior,
                                      void *prior_ctx, const ml_mh_config *config,
                                      ml_sample **out);

/* Convenience wrapper for the conjugate target. */
ML_API ml_status ml_sample_metropolis_normal(ml_rng *rng, const ml_dataset *dataset,
                                             const ml_normal_model *model,
                                             const ml_mh_config *config, ml_sample **out);

/* Wraps n >= 2 finite external draws (treated as exact iid). */
ML_API ml_status ml_sample_create(const double *draws, size_t n, ml_sample **out);

/* Text format: one float per line, '#' comments; a provenance comment is
 * written on export and recovered on import. */
ML_API ml_status ml_sample_read(const char *path, ml_sample **out);
ML_API ml_status ml_sample_write(const ml_sample *sample, const char *path);

ML_API void ml_sample_free(ml_sample *sample);
ML_API size_t ml_sample_size(const ml_sample *sample);
ML_API const double *ml_sample_draws(const ml_sample *sample);
ML_API int ml_sample_is_mcmc(const ml_sample *sample);
ML_API ml_status ml_sample_mcmc_info(const ml_sample *sample, size_t *burn_in_out,
                                     size_t *thinning_out, double *acceptance_rate_out);

/* ---- kernel density estimation ----------------------------------------- */

typedef enum ml_bandwidth_rule {
  ML_BW_SILVERMAN = 0,
  ML_BW_FIXED = 1
} ml_bandwidth_rule;

typedef enum ml_eval_mode {
  ML_EVAL_DIRECT = 0,     /* exact kernel sum at each point */
  ML_EVAL_GRID_INTERP = 1 /* linear interpolation on the fitted grid */
} ml_eval_mode;

typedef struct ml_kde_config {
  ml_bandwidth_rule bandwidth_rule;
  double fixed_bandwidth; /* used when bandwidth_rule == ML_BW_FIXED */
  size_t grid_size;       /* >= 2 */
  double padding_bandwidths;
  ml_eval_mode eval_mode;
} ml_kde_config;

/* Silverman rule, grid 401, padding 6 bandwidths, direct evaluation. */
ML_API ml_kde_config ml_kde_config_default(void);

/* 0.9 * min(sd, IQR/1.349) * N^(-1/5); fails with ML_E_DEGENERATE_SAMPLE
 * when the spread is zero. */
ML_API ml_status ml_silverman_bandwidth(const double *sample, size_t n, double *out);

/* Linear binning plus Gaussian convolution on an equally spaced grid
 * spanning the sample range padded by padding_bandwidths * h. */
ML_API ml_status ml_kde_fit(const ml_sample *sample, const ml_kde_config *config,
                            ml_grid **out);

ML_API ml_status ml_kde_eval_direct(const ml_sample *sample, double bandwidth, double theta,
                                    double *out);

/* Fails with ML_E_OUT_OF_GRID_RANGE when theta is outside the grid. */
ML_API ml_status ml_grid_interp(const ml_grid *grid, double theta, double *out);

ML_API size_t ml_grid_size(const ml_grid *grid);
ML_API double ml_grid_bandwidth(const ml_grid *grid);
ML_API const double *ml_grid_abscissae(const ml_grid *grid);
ML_API const double *ml_grid_ordinates(const ml_grid *grid);

/* CSV with header "x,density", 17-significant-digit floats. */
ML_API ml_status ml_grid_write_csv(const ml_grid *grid, const char *path);

ML_API void ml_grid_free(ml_grid *grid);

/* ---- evidence estimation ------------------------------------------------ */

/* Max-shifted log(sum(exp(values))); values must be finite, n >= 1. */
ML_API ml_status ml_log_sum_exp(const double *values, size_t n, double *out);

/* The estimator pipeline: estimate the posterior density from the sample,
 * then average likelihood x prior / density over the draws in log domain.
 * Fails with ML_E_DENSITY_FLOOR if the density at any draw is <= 1e-300. */
ML_API ml_status ml_estimate_kde(const ml_dataset *dataset, const ml_normal_model *model,
                                 const ml_sample *sample, const ml_kde_config *kde_config,
                                 ml_estimate **out);

/* Same pipeline for a custom model supplied as callbacks. */
ML_API ml_status ml_estimate_kde_custom(ml_log_density_fn log_likelihood, void *likelihood_ctx,
                                        ml_log_density_fn log_prior, void *prior_ctx,
                                        const ml_sample *sample,
                                        const ml_kde_config *kde_config, ml_estimate **out);

/* Plug in an exact Normal posterior density instead of a KDE; with the true
 * posterior parameters the result equals the closed form for any sample. */
ML_API ml_status ml_estimate_with_posterior(const ml_dataset *dataset,
                                            const ml_normal_model *model,
                                            const ml_sample *sample, double post_mean,
                                            double post_variance, ml_estimate **out);

ML_API double ml_estimate_log_evidence(const ml_estimate *estimate);
ML_API size_t ml_estimate_n_samples(const ml_estimate *estimate);
ML_API double ml_estimate_log_weight_sd(const ml_estimate *estimate);
ML_API double ml_estimate_log_weight_min(const ml_estimate *estimate);
ML_API double ml_estimate_log_weight_max(const ml_estimate *estimate);
ML_API size_t ml_estimate_n_clamped(const ml_estimate *estimate);

/* Provenance string: sample source, density configuration, model. */
ML_API const char *ml_estimate_config_echo(const ml_estimate *estimate);

ML_API void ml_estimate_free(ml_estimate *estimate);

/* ---- quadrature oracle -------------------------------------------------- */

typedef struct ml_quadrature_config {
  double center;
  double half_width_sds; /* window half width in units of scale, > 0 */
  double scale;          /* characteristic theta sd, > 0 */
  double abs_tol;        /* on the max-shifted linear-scale integral, > 0 */
  int max_depth;         /* adaptive recursion limit, >= 1 */
} ml_quadrature_config;

/* Centered on the posterior mean when use_posterior_hint is nonzero, else on
 * the prior mean; scale = max(posterior sd, sigma0) or sigma0. Remaining
 * fields take the defaults (12 sds, 1e-10, depth 40). */
ML_API ml_status ml_quadrature_config_default(const ml_dataset *dataset,
                                              const ml_normal_model *model,
                                              int use_posterior_hint,
                                              ml_quadrature_config *out);

/* Adaptive Simpson integration of the marginal-likelihood integrand on the
 * window. On ML_E_TOLERANCE_NOT_MET the best value is still written to out
 * and ml_last_error() reports the achieved error estimate. */
ML_API ml_status ml_quadrature_log_marginal(const ml_dataset *dataset,
                                            const ml_normal_model *model,
                                            const ml_quadrature_config *config, double *out);

/* log integral of exp(log_integrand) for an arbitrary integrand. */
ML_API ml_status ml_quadrature_log_integral(ml_log_density_fn log_integrand, void *ctx,
                                            const ml_quadrature_config *config, double *out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MARGLIK_H */
