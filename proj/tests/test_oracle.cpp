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
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "sampling.hpp"

using namespace marglik;

TEST_CASE("quadrature matches the predictive-density reduction at n = 1") {
  const NormalModelConfig unit{1.0, 0.0, 1.0};
  const Dataset data = dataset_from_values(std::vector<double>{0.0});
  QuadratureConfig cfg;
  cfg.center = 0.0;
  cfg.scale = 1.0;
  const double result = quadrature_log_marginal(make_normal_model(unit), data, cfg);
  CHECK(std::fabs(result - (-1.2655121234846454)) < 1e-8);
}

TEST_CASE("quadrature agrees with the closed form across the config grid") {
  RngStream rng(1234);
  for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{25}}) {
    for (double sigma : {0.5, 3.0}) {
      for (double sigma0 : {1.0, 10.0}) {
        for (double theta0 : {-2.0, 0.0, 5.0}) {
          const NormalModelConfig config{sigma, theta0, sigma0};
          const Dataset data =
              dataset_from_values(sample_normal(rng, theta0 + 1.0, sigma, n));
          const PosteriorParams post = normal_posterior_params(data, config);
          const double quad = quadrature_log_marginal(
              make_normal_model(config), data, default_quadrature_config(post, config));
          const double closed = normal_log_marginal_closed_form(data, config);
          CHECK(std::fabs(quad - closed) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("doubling the window half width changes nothing measurable") {
  RngStream rng(1702);
  for (std::size_t n : {std::size_t{1}, std::size_t{25}}) {
    for (double sigma : {0.5, 3.0}) {
      for (double sigma0 : {1.0, 10.0}) {
        const NormalModelConfig config{sigma, 0.0, sigma0};
        const Dataset data = dataset_from_values(sample_normal(rng, -1.0, sigma, n));
        const PosteriorParams post = normal_posterior_params(data, config);
        QuadratureConfig cfg = default_quadrature_config(post, config);

        const double narrow = quadrature_log_marginal(make_normal_model(config), data, cfg);
        cfg.half_width_sds = 24.0;
        const double wide = quadrature_log_marginal(make_normal_model(config), data, cfg);
        CHECK(std::fabs(narrow - wide) < 1e-10);
      }
    }
  }
}

TEST_CASE("tightening the tolerance never worsens the closed-form agreement") {
  RngStream rng(99);
  const NormalModelConfig config{3.0, 0.0, 10.0};
  const Dataset data = dataset_from_values(sample_normal(rng, -1.0, 3.0, 25));
  const PosteriorParams post = normal_posterior_params(data, config);
  const double closed = normal_log_marginal_closed_form(data, config);

  QuadratureConfig cfg = default_quadrature_config(post, config);
  cfg.abs_tol = 1e-6;
  double prev_err = std::fabs(
      quadrature_log_marginal(make_normal_model(config), data, cfg) - closed);
  for (double tol : {1e-7, 1e-8, 1e-9, 1e-10}) {
    cfg.abs_tol = tol;
    const double err = std::fabs(
        quadrature_log_marginal(make_normal_model(config), data, cfg) - closed);
    CHECK(err <= prev_err + 1e-14);
    prev_err = err;
  }
}

TEST_CASE("a log integrand that is -inf everywhere reports empty support") {
  const BayesModelSpec model{
      [](double, const Dataset&) { return 0.0; },
      [](double) { return -std::numeric_limits<double>::infinity(); },
  };
  const Dataset data = dataset_from_values(std::vector<double>{0.0});
  try {
    quadrature_log_marginal(model, data, QuadratureConfig{});
    FAIL("expected empty_support");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_support);
  }
}

TEST_CASE("partial support inside the window integrates fine") {
  // prior restricted to [0, 1]; integral of the flat integrand is log(1).
  // The support edges exhaust the recursion depth locally, but the residual
  // error estimate stays far below abs_tol, so the result is returned.
  const BayesModelSpec model{
      [](double, const Dataset&) { return 0.0; },
      [](double theta) {
        return theta >= 0.0 && theta <= 1.0 ? 0.0
                                            : -std::numeric_limits<double>::infinity();
      },
  };
  const Dataset data = dataset_from_values(std::vector<double>{0.0});
  QuadratureConfig cfg;
  cfg.center = 0.5;
  cfg.scale = 1.0;
  cfg.half_width_sds = 12.0;
  const double result = quadrature_log_marginal(model, data, cfg);
  CHECK(std::fabs(result - 0.0) < 1e-9);
}

TEST_CASE("an exhausted recursion budget reports the best value") {
  RngStream rng(1702);
  const NormalModelConfig config{3.0, 0.0, 10.0};
  const Dataset data = dataset_from_values(sample_normal(rng, -1.0, 3.0, 25));
  const PosteriorParams post = normal_posterior_params(data, config);
  const double closed = normal_log_marginal_closed_form(data, config);

  QuadratureConfig cfg = default_quadrature_config(post, config);
  cfg.abs_tol = 1e-16;
  cfg.max_depth = 1;
  try {
    quadrature_log_marginal(make_normal_model(config), data, cfg);
    FAIL("expected tolerance_not_met");
  } catch (const tolerance_not_met& e) {
    CHECK(e.code() == errc::tolerance_not_met);
    CHECK(std::fabs(e.best_value() - closed) < 1e-3);  // still a decent value
    CHECK(e.achieved_tol() > 0.0);
  }
}

TEST_CASE("default quadrature config mirrors posterior and prior hints") {
  const NormalModelConfig config{1.0, 0.0, 10.0};
  {
    const QuadratureConfig cfg =
        default_quadrature_config(PosteriorParams{1.0, 0.5}, config);
    CHECK(cfg.center == 1.0);
    CHECK(cfg.scale == 10.0);  // max(sqrt(0.5), 10)
    CHECK(cfg.half_width_sds == 12.0);
    CHECK(cfg.abs_tol == 1e-10);
    CHECK(cfg.max_depth == 40);
  }
  {
    const QuadratureConfig cfg = default_quadrature_config(std::nullopt, config);
    CHECK(cfg.center == 0.0);
    CHECK(cfg.scale == 10.0);
  }
  {
    // posterior wider than the prior keeps the posterior sd
    const QuadratureConfig cfg =
        default_quadrature_config(PosteriorParams{2.0, 400.0}, config);
    CHECK(cfg.scale == 20.0);
  }
}

TEST_CASE("quadrature config validation") {
  const NormalModelConfig unit{1.0, 0.0, 1.0};
  const Dataset data = dataset_from_values(std::vector<double>{0.0});
  QuadratureConfig cfg;
  cfg.abs_tol = 0.0;
  CHECK_THROWS_AS(quadrature_log_marginal(make_normal_model(unit), data, cfg), error);
  cfg = QuadratureConfig{};
  cfg.scale = -1.0;
  CHECK_THROWS_AS(quadrature_log_marginal(make_normal_model(unit), data, cfg), error);
  cfg = QuadratureConfig{};
  cfg.max_depth = 0;
  CHECK_THROWS_AS(quadrature_log_marginal(make_normal_model(unit), data, cfg), error);
  cfg = QuadratureConfig{};
  cfg.half_width_sds = 0.0;
  CHECK_THROWS_AS(quadrature_log_marginal(make_normal_model(unit), data, cfg), error);
}

TEST_CASE("quadrature handles integrands far below double range via the max shift") {
  // n large enough that the unshifted integrand would underflow everywhere
  RngStream rng(555);
  const NormalModelConfig config{1.0, 0.0, 5.0};
  const Dataset data = dataset_from_values(sample_normal(rng, 0.0, 1.0, 2000));
  const PosteriorParams post = normal_posterior_params(data, config);
  const double quad = quadrature_log_marginal(make_normal_model(config), data,
                                              default_quadrature_config(post, config));
  const double closed = normal_log_marginal_closed_form(data, config);
  CHECK(quad < -2000.0);  // deep underflow territory on the linear scale
  CHECK(std::fabs(quad - closed) < 1e-8);
}
