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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <marglik.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct Cleanup {
  std::string path;
  ~Cleanup() { std::remove(path.c_str()); }
};

// conjugate target via callbacks, to exercise the custom-model entry points
struct NormalTarget {
  double sigma;
  double theta0;
  double sigma0;
  const double* values;
  size_t n;
};

double callback_log_likelihood(double theta, void* ctx) {
  const auto* t = static_cast<const NormalTarget*>(ctx);
  double total = 0.0;
  for (size_t i = 0; i < t->n; ++i) {
    const double z = (t->values[i] - theta) / t->sigma;
    total += -0.5 * std::log(2.0 * M_PI) - std::log(t->sigma) - 0.5 * z * z;
  }
  return total;
}

double callback_log_prior(double theta, void* ctx) {
  const auto* t = static_cast<const NormalTarget*>(ctx);
  const double z = (theta - t->theta0) / t->sigma0;
  return -0.5 * std::log(2.0 * M_PI) - std::log(t->sigma0) - 0.5 * z * z;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strcmp(ml_status_name(ML_OK), "OK") == 0);
  CHECK(std::strcmp(ml_status_name(ML_E_DENSITY_FLOOR), "E_DENSITY_FLOOR") == 0);
  CHECK(std::strcmp(ml_status_name(ML_E_PARSE), "E_PARSE") == 0);
  CHECK(ml_version() != nullptr);
}

TEST_CASE("dataset lifecycle and statistics") {
  const double values[] = {1.0, 2.0, 3.0};
  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_create(values, 3, &data) == ML_OK);
  CHECK(ml_dataset_size(data) == 3);
  CHECK(std::fabs(ml_dataset_mean(data) - 2.0) < 1e-15);
  CHECK(std::fabs(ml_dataset_pop_variance(data) - 2.0 / 3.0) < 1e-15);
  CHECK(ml_dataset_values(data)[2] == 3.0);
  ml_dataset_free(data);

  ml_dataset* empty = nullptr;
  CHECK(ml_dataset_create(values, 0, &empty) == ML_E_EMPTY_DATASET);
  CHECK(std::strlen(ml_last_error()) > 0);
  CHECK(ml_dataset_create(nullptr, 3, &empty) == ML_E_INVALID_ARGUMENT);

  const double bad[] = {1.0, NAN};
  CHECK(ml_dataset_create(bad, 2, &empty) == ML_E_INVALID_OBSERVATION);
}

TEST_CASE("datasets load from text files") {
  Cleanup file{"./capi_data.txt"};
  {
    std::FILE* f = std::fopen(file.path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("# three observations\n1.0\n2.0\n3.0\n", f);
    std::fclose(f);
  }
  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_read(file.path.c_str(), &data) == ML_OK);
  CHECK(ml_dataset_size(data) == 3);
  CHECK(std::fabs(ml_dataset_mean(data) - 2.0) < 1e-15);
  ml_dataset_free(data);

  ml_dataset* missing = nullptr;
  CHECK(ml_dataset_read("./no_such_file_5150.txt", &missing) == ML_E_IO);
}

TEST_CASE("normal model functions through the C surface") {
  const double zero = 0.0;
  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_create(&zero, 1, &data) == ML_OK);
  const ml_normal_model model{1.0, 0.0, 1.0};

  double ll = 0.0;
  CHECK(ml_normal_log_likelihood(data, &model, 0.0, &ll) == ML_OK);
  CHECK(std::fabs(ll - (-0.91893853320467267)) < 1e-12);

  double lp = 0.0;
  CHECK(ml_normal_log_prior(&model, 0.0, &lp) == ML_OK);
  CHECK(std::fabs(lp - (-0.91893853320467267)) < 1e-12);

  double mean = 0.0;
  double variance = 0.0;
  CHECK(ml_normal_posterior(data, &model, &mean, &variance) == ML_OK);
  CHECK(std::fabs(mean - 0.0) < 1e-15);
  CHECK(std::fabs(variance - 0.5) < 1e-15);

  double log_marginal = 0.0;
  CHECK(ml_normal_log_marginal(data, &model, &log_marginal) == ML_OK);
  CHECK(std::fabs(log_marginal - (-1.2655121234846454)) < 1e-12);

  const ml_normal_model bad{-1.0, 0.0, 1.0};
  CHECK(ml_normal_log_marginal(data, &bad, &log_marginal) == ML_E_INVALID_SCALE);
  ml_dataset_free(data);
}

TEST_CASE("rng determinism through the C surface") {
  ml_rng* a = nullptr;
  ml_rng* b = nullptr;
  REQUIRE(ml_rng_create(7, &a) == ML_OK);
  REQUIRE(ml_rng_create(7, &b) == ML_OK);
  std::vector<double> xa(1000);
  std::vector<double> xb(1000);
  CHECK(ml_rng_normal(a, 0.0, 1.0, 1000, xa.data()) == ML_OK);
  CHECK(ml_rng_normal(b, 0.0, 1.0, 1000, xb.data()) == ML_OK);
  CHECK(xa == xb);

  double dummy = 0.0;
  CHECK(ml_rng_normal(a, 0.0, 0.0, 1, &dummy) == ML_E_INVALID_SCALE);
  ml_rng_free(a);
  ml_rng_free(b);
}

TEST_CASE("exact posterior samples and the sample file surface") {
  ml_rng* rng = nullptr;
  REQUIRE(ml_rng_create(99, &rng) == ML_OK);
  ml_sample* sample = nullptr;
  REQUIRE(ml_sample_exact_posterior(rng, 1.0, 0.5, 5000, &sample) == ML_OK);
  CHECK(ml_sample_size(sample) == 5000);
  CHECK(ml_sample_is_mcmc(sample) == 0);
  CHECK(ml_sample_mcmc_info(sample, nullptr, nullptr, nullptr) == ML_E_INVALID_ARGUMENT);

  double mean = 0.0;
  const double* draws = ml_sample_draws(sample);
  for (size_t i = 0; i < 5000; ++i) {
    mean += draws[i];
  }
  mean /= 5000.0;
  CHECK(std::fabs(mean - 1.0) < 4.0 * std::sqrt(0.5 / 5000.0));

  Cleanup file{"./capi_sample.txt"};
  REQUIRE(ml_sample_write(sample, file.path.c_str()) == ML_OK);
  ml_sample* loaded = nullptr;
  REQUIRE(ml_sample_read(file.path.c_str(), &loaded) == ML_OK);
  REQUIRE(ml_sample_size(loaded) == 5000);
  CHECK(std::memcmp(ml_sample_draws(loaded), draws, 5000 * sizeof(double)) == 0);

  ml_sample* tiny = nullptr;
  CHECK(ml_sample_exact_posterior(rng, 0.0, 1.0, 1, &tiny) == ML_E_SAMPLE_TOO_SMALL);
  CHECK(ml_sample_read("./no_such_file_8321.txt", &tiny) == ML_E_IO);

  ml_sample_free(loaded);
  ml_sample_free(sample);
  ml_rng_free(rng);
}

TEST_CASE("metropolis through callbacks matches the conjugate posterior") {
  ml_rng* data_rng = nullptr;
  REQUIRE(ml_rng_create(1702, &data_rng) == ML_OK);
  std::vector<double> observations(25);
  REQUIRE(ml_rng_normal(data_rng, -1.0, 3.0, 25, observations.data()) == ML_OK);
  ml_rng_free(data_rng);

  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_create(observations.data(), observations.size(), &data) == ML_OK);
  const ml_normal_model model{3.0, 0.0, 10.0};
  double post_mean = 0.0;
  double post_variance = 0.0;
  REQUIRE(ml_normal_posterior(data, &model, &post_mean, &post_variance) == ML_OK);

  NormalTarget target{3.0, 0.0, 10.0, observations.data(), observations.size()};
  ml_mh_config cfg = ml_mh_config_default(std::sqrt(post_variance), post_mean, 30000);
  cfg.burn_in = 2000;
  cfg.thinning = 2;

  ml_rng* rng = nullptr;
  REQUIRE(ml_rng_create(31337, &rng) == ML_OK);
  ml_sample* chain = nullptr;
  REQUIRE(ml_sample_metropolis(rng, callback_log_likelihood, &target, callback_log_prior,
                               &target, &cfg, &chain) == ML_OK);
  CHECK(ml_sample_size(chain) == (30000 - 2000) / 2);
  CHECK(ml_sample_is_mcmc(chain) == 1);
  size_t burn_in = 0;
  size_t thinning = 0;
  double acceptance = 0.0;
  CHECK(ml_sample_mcmc_info(chain, &burn_in, &thinning, &acceptance) == ML_OK);
  CHECK(burn_in == 2000);
  CHECK(thinning == 2);
  CHECK(acceptance > 0.05);
  CHECK(acceptance < 0.95);

  double mean = 0.0;
  for (size_t i = 0; i < ml_sample_size(chain); ++i) {
    mean += ml_sample_draws(chain)[i];
  }
  mean /= static_cast<double>(ml_sample_size(chain));
  CHECK(std::fabs(mean - post_mean) < 0.1);

  // conjugate convenience wrapper with the same seed gives the same chain
  ml_rng* rng2 = nullptr;
  REQUIRE(ml_rng_create(31337, &rng2) == ML_OK);
  ml_sample* chain2 = nullptr;
  REQUIRE(ml_sample_metropolis_normal(rng2, data, &model, &cfg, &chain2) == ML_OK);
  REQUIRE(ml_sample_size(chain2) == ml_sample_size(chain));
  CHECK(std::memcmp(ml_sample_draws(chain2), ml_sample_draws(chain),
                    ml_sample_size(chain) * sizeof(double)) == 0);

  ml_sample_free(chain2);
  ml_sample_free(chain);
  ml_rng_free(rng2);
  ml_rng_free(rng);
  ml_dataset_free(data);
}

TEST_CASE("kde surface: bandwidth, fit, interp, direct, csv") {
  const double three[] = {-1.0, 0.0, 1.0};
  double h = 0.0;
  REQUIRE(ml_silverman_bandwidth(three, 3, &h) == ML_OK);
  CHECK(std::fabs(h - 0.53555775061838962) < 1e-12);

  const double constant[] = {2.0, 2.0, 2.0};
  CHECK(ml_silverman_bandwidth(constant, 3, &h) == ML_E_DEGENERATE_SAMPLE);

  ml_rng* rng = nullptr;
  REQUIRE(ml_rng_create(52, &rng) == ML_OK);
  ml_sample* sample = nullptr;
  REQUIRE(ml_sample_exact_posterior(rng, 0.0, 1.0, 2000, &sample) == ML_OK);

  const ml_kde_config cfg = ml_kde_config_default();
  CHECK(cfg.grid_size == 401);
  CHECK(cfg.padding_bandwidths == 6.0);
  ml_grid* grid = nullptr;
  REQUIRE(ml_kde_fit(sample, &cfg, &grid) == ML_OK);
  REQUIRE(ml_grid_size(grid) == 401);
  CHECK(ml_grid_bandwidth(grid) > 0.0);

  // trapezoid mass of the returned grid
  const double* xs = ml_grid_abscissae(grid);
  const double* ys = ml_grid_ordinates(grid);
  double mass = 0.0;
  for (size_t i = 0; i + 1 < 401; ++i) {
    mass += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
  }
  CHECK(std::fabs(mass - 1.0) < 1e-6);

  double at_zero = 0.0;
  REQUIRE(ml_grid_interp(grid, 0.0, &at_zero) == ML_OK);
  double direct_at_zero = 0.0;
  REQUIRE(ml_kde_eval_direct(sample, ml_grid_bandwidth(grid), 0.0, &direct_at_zero) == ML_OK);
  CHECK(std::fabs(at_zero - direct_at_zero) < 1e-3);

  double outside = 0.0;
  CHECK(ml_grid_interp(grid, xs[0] - 1.0, &outside) == ML_E_OUT_OF_GRID_RANGE);

  Cleanup csv{"./capi_grid.csv"};
  CHECK(ml_grid_write_csv(grid, csv.path.c_str()) == ML_OK);
  std::FILE* f = std::fopen(csv.path.c_str(), "r");
  REQUIRE(f != nullptr);
  char header[32] = {0};
  REQUIRE(std::fgets(header, sizeof(header), f) != nullptr);
  CHECK(std::strncmp(header, "x,density", 9) == 0);
  std::fclose(f);

  ml_grid_free(grid);
  ml_sample_free(sample);
  ml_rng_free(rng);
}

TEST_CASE("log_sum_exp through the C surface") {
  const double values[] = {-1000.0, -1000.0};
  double out = 0.0;
  REQUIRE(ml_log_sum_exp(values, 2, &out) == ML_OK);
  CHECK(std::fabs(out - (-999.30685281944011)) < 1e-10);
  CHECK(ml_log_sum_exp(values, 0, &out) == ML_E_EMPTY_INPUT);
}

TEST_CASE("full estimation pipeline through the C surface") {
  ml_rng* rng = nullptr;
  REQUIRE(ml_rng_create(1702, &rng) == ML_OK);
  std::vector<double> observations(25);
  REQUIRE(ml_rng_normal(rng, -1.0, 3.0, 25, observations.data()) == ML_OK);
  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_create(observations.data(), observations.size(), &data) == ML_OK);
  const ml_normal_model model{3.0, 0.0, 10.0};

  double post_mean = 0.0;
  double post_variance = 0.0;
  REQUIRE(ml_normal_posterior(data, &model, &post_mean, &post_variance) == ML_OK);
  ml_sample* sample = nullptr;
  REQUIRE(ml_sample_exact_posterior(rng, post_mean, post_variance, 1000, &sample) == ML_OK);

  double closed = 0.0;
  REQUIRE(ml_normal_log_marginal(data, &model, &closed) == ML_OK);

  const ml_kde_config kde_cfg = ml_kde_config_default();
  ml_estimate* est = nullptr;
  REQUIRE(ml_estimate_kde(data, &model, sample, &kde_cfg, &est) == ML_OK);
  CHECK(std::fabs(ml_estimate_log_evidence(est) - closed) <= 0.05);
  CHECK(ml_estimate_n_samples(est) == 1000);
  CHECK(ml_estimate_log_weight_sd(est) < 0.5);
  CHECK(ml_estimate_log_weight_min(est) <= ml_estimate_log_evidence(est));
  CHECK(ml_estimate_log_weight_max(est) >= ml_estimate_log_evidence(est));
  CHECK(ml_estimate_n_clamped(est) == 0);
  CHECK(std::string(ml_estimate_config_echo(est)).find("silverman") != std::string::npos);

  // exact plug-in equals the closed form to near machine precision
  ml_estimate* exact = nullptr;
  REQUIRE(ml_estimate_with_posterior(data, &model, sample, post_mean, post_variance,
                                     &exact) == ML_OK);
  CHECK(std::fabs(ml_estimate_log_evidence(exact) - closed) < 1e-10);

  // the custom-callback pipeline reproduces the built-in one exactly
  NormalTarget target{3.0, 0.0, 10.0, observations.data(), observations.size()};
  ml_estimate* custom = nullptr;
  REQUIRE(ml_estimate_kde_custom(callback_log_likelihood, &target, callback_log_prior,
                                 &target, sample, &kde_cfg, &custom) == ML_OK);
  CHECK(std::fabs(ml_estimate_log_evidence(custom) - ml_estimate_log_evidence(est)) < 1e-9);

  ml_estimate_free(custom);
  ml_estimate_free(exact);
  ml_estimate_free(est);
  ml_sample_free(sample);
  ml_dataset_free(data);
  ml_rng_free(rng);
}

TEST_CASE("density floor violations surface through the status code") {
  const double xs[] = {0.0, 0.1, -0.1};
  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_create(xs, 3, &data) == ML_OK);
  const ml_normal_model model{1.0, 0.0, 1.0};

  ml_rng* rng = nullptr;
  REQUIRE(ml_rng_create(4, &rng) == ML_OK);
  ml_sample* sample = nullptr;
  REQUIRE(ml_sample_exact_posterior(rng, 0.0, 0.5, 100, &sample) == ML_OK);

  // a plugged-in posterior centered absurdly far away: its density at every
  // draw underflows past the 1e-300 floor
  ml_estimate* est = nullptr;
  CHECK(ml_estimate_with_posterior(data, &model, sample, 1e6, 1e-4, &est) ==
        ML_E_DENSITY_FLOOR);
  CHECK(std::string(ml_last_error()).find("density") != std::string::npos);

  ml_sample_free(sample);
  ml_dataset_free(data);
  ml_rng_free(rng);
}

TEST_CASE("quadrature oracle through the C surface") {
  const double zero = 0.0;
  ml_dataset* data = nullptr;
  REQUIRE(ml_dataset_create(&zero, 1, &data) == ML_OK);
  const ml_normal_model model{1.0, 0.0, 1.0};

  ml_quadrature_config cfg;
  REQUIRE(ml_quadrature_config_default(data, &model, 1, &cfg) == ML_OK);
  CHECK(cfg.half_width_sds == 12.0);
  CHECK(cfg.abs_tol == 1e-10);
  CHECK(cfg.max_depth == 40);

  double quad = 0.0;
  REQUIRE(ml_quadrature_log_marginal(data, &model, &cfg, &quad) == ML_OK);
  CHECK(std::fabs(quad - (-1.2655121234846454)) < 1e-8);

  // exhausted budget still yields the best value through the out parameter
  cfg.abs_tol = 1e-16;
  cfg.max_depth = 1;
  double best = 0.0;
  CHECK(ml_quadrature_log_marginal(data, &model, &cfg, &best) == ML_E_TOLERANCE_NOT_MET);
  CHECK(std::fabs(best - (-1.2655121234846454)) < 1e-3);
  CHECK(std::string(ml_last_error()).find("best value") != std::string::npos);

  ml_dataset_free(data);
}

TEST_CASE("null handles are rejected, not dereferenced") {
  double out = 0.0;
  CHECK(ml_normal_log_marginal(nullptr, nullptr, &out) == ML_E_INVALID_ARGUMENT);
  CHECK(ml_grid_interp(nullptr, 0.0, &out) == ML_E_INVALID_ARGUMENT);
  CHECK(ml_sample_write(nullptr, "x") == ML_E_INVALID_ARGUMENT);
  CHECK(std::isnan(ml_estimate_log_evidence(nullptr)));
  CHECK(ml_dataset_size(nullptr) == 0);
  ml_dataset_free(nullptr);
  ml_sample_free(nullptr);
  ml_grid_free(nullptr);
  ml_estimate_free(nullptr);
  ml_rng_free(nullptr);
}
