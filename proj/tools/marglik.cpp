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

// Command-line front end. Everything numerical goes through the public C API
// in marglik.h; this file only parses flags, orchestrates pipelines and
// formats reports.
//
// Exit codes: 0 success, 2 usage error, 3 numerical/diagnostic failure,
// 4 I/O or parse failure. Every error line is `E_<CODE>: <detail>`.

#include <marglik.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

int exit_code_for(ml_status status) {
  switch (status) {
    case ML_E_IO:
    case ML_E_PARSE:
      return 4;
    default:
      return 3;
  }
}

[[noreturn]] void fail_status(ml_status status) {
  std::cerr << ml_status_name(status) << ": " << ml_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(ml_status status) {
  if (status != ML_OK) {
    fail_status(status);
  }
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "E_USAGE: " << message << "\n";
  std::exit(2);
}

template <typename T, void (*FreeFn)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { FreeFn(ptr); }
  T** out() { return &ptr; }
  operator T*() const { return ptr; }
};

using DatasetHandle = Handle<ml_dataset, ml_dataset_free>;
using RngHandle = Handle<ml_rng, ml_rng_free>;
using SampleHandle = Handle<ml_sample, ml_sample_free>;
using GridHandle = Handle<ml_grid, ml_grid_free>;
using EstimateHandle = Handle<ml_estimate, ml_estimate_free>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// ---- shared flag groups -------------------------------------------------

struct ModelFlags {
  double sigma = 3.0;
  double theta0 = 0.0;
  double sigma0 = 10.0;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
  cmd->add_option("--sigma", flags.sigma, "Known observation sd")->capture_default_str();
  cmd->add_option("--theta0", flags.theta0, "Prior mean")->capture_default_str();
  cmd->add_option("--sigma0", flags.sigma0, "Prior sd")->capture_default_str();
}

void validate_model_flags(const ModelFlags& flags) {
  if (!(flags.sigma > 0.0)) {
    usage_error("--sigma must be > 0");
  }
  if (!(flags.sigma0 > 0.0)) {
    usage_error("--sigma0 must be > 0");
  }
}

ml_normal_model to_model(const ModelFlags& flags) {
  return ml_normal_model{flags.sigma, flags.theta0, flags.sigma0};
}

struct KdeFlags {
  double bandwidth = 0.0;  // 0 means Silverman
  bool bandwidth_set = false;
  std::size_t grid_size = 401;
  double padding = 6.0;
  std::string eval_mode = "direct";
};

void add_kde_flags(CLI::App* cmd, KdeFlags& flags) {
  auto* bw = cmd->add_option("--kde-bandwidth", flags.bandwidth,
                             "Fixed KDE bandwidth (default: Silverman's rule)");
  cmd->callback([bw, &flags] { flags.bandwidth_set = bw->count() > 0; });
  cmd->add_option("--kde-grid-size", flags.grid_size, "Grid points for the fitted KDE")
      ->capture_default_str();
  cmd->add_option("--kde-padding", flags.padding,
                  "Grid padding beyond the sample range, in bandwidths")
      ->capture_default_str();
  cmd->add_option("--eval-mode", flags.eval_mode, "KDE evaluation at the draws")
      ->check(CLI::IsMember({"direct", "grid-interp"}))
      ->capture_default_str();
}

void validate_kde_flags(const KdeFlags& flags) {
  if (flags.bandwidth_set && !(flags.bandwidth > 0.0)) {
    usage_error("--kde-bandwidth must be > 0");
  }
  if (flags.grid_size < 2) {
    usage_error("--kde-grid-size must be >= 2");
  }
  if (!(flags.padding > 0.0)) {
    usage_error("--kde-padding must be > 0");
  }
}

ml_kde_config to_kde_config(const KdeFlags& flags) {
  ml_kde_config cfg = ml_kde_config_default();
  if (flags.bandwidth_set) {
    cfg.bandwidth_rule = ML_BW_FIXED;
    cfg.fixed_bandwidth = flags.bandwidth;
  }
  cfg.grid_size = flags.grid_size;
  cfg.padding_bandwidths = flags.padding;
  cfg.eval_mode = flags.eval_mode == "grid-interp" ? ML_EVAL_GRID_INTERP : ML_EVAL_DIRECT;
  return cfg;
}

ordered_json kde_config_json(const KdeFlags& flags) {
  ordered_json j;
  j["bandwidth_rule"] = flags.bandwidth_set ? "fixed" : "silverman";
  if (flags.bandwidth_set) {
    j["fixed_bandwidth"] = flags.bandwidth;
  } else {
    j["fixed_bandwidth"] = nullptr;
  }
  j["grid_size"] = flags.grid_size;
  j["padding_bandwidths"] = flags.padding;
  j["eval_mode"] = flags.eval_mode;
  return j;
}

// ---- reports -------------------------------------------------------------

struct ReportBody {
  std::optional<double> log_theoretical;
  double log_estimate = 0.0;
  const ml_estimate* estimate = nullptr;
};

void emit_estimator_report(const ordered_json& config, const ReportBody& body,
                           double timing_ms, const std::string& format) {
  const std::optional<double> abs_error =
      body.log_theoretical.has_value()
          ? std::optional<double>(std::fabs(*body.log_theoretical - body.log_estimate))
          : std::nullopt;
  if (format == "json") {
    ordered_json j;
    j["config"] = config;
    j["log_theoretical"] =
        body.log_theoretical.has_value() ? ordered_json(*body.log_theoretical) : nullptr;
    j["log_estimate"] = body.log_estimate;
    j["abs_error"] = abs_error.has_value() ? ordered_json(*abs_error) : nullptr;
    ordered_json d;
    d["n_samples"] = ml_estimate_n_samples(body.estimate);
    d["log_weight_sd"] = ml_estimate_log_weight_sd(body.estimate);
    d["log_weight_min"] = ml_estimate_log_weight_min(body.estimate);
    d["log_weight_max"] = ml_estimate_log_weight_max(body.estimate);
    d["n_clamped"] = ml_estimate_n_clamped(body.estimate);
    j["diagnostics"] = d;
    j["timing_ms"] = timing_ms;
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (body.log_theoretical.has_value()) {
    std::cout << "log theoretical   " << fmt17(*body.log_theoretical) << "\n";
  }
  std::cout << "log estimate      " << fmt17(body.log_estimate) << "\n";
  if (abs_error.has_value()) {
    std::cout << "abs error         " << fmt17(*abs_error) << "\n";
  }
  std::cout << "n samples         " << ml_estimate_n_samples(body.estimate) << "\n";
  std::cout << "log weight sd     " << fmt17(ml_estimate_log_weight_sd(body.estimate)) << "\n";
  std::cout << "log weight range  [" << fmt17(ml_estimate_log_weight_min(body.estimate))
            << ", " << fmt17(ml_estimate_log_weight_max(body.estimate)) << "]\n";
  std::cout << "n clamped         " << ml_estimate_n_clamped(body.estimate) << "\n";
  std::cout << "provenance        " << ml_estimate_config_echo(body.estimate) << "\n";
  std::cout << "time ms           " << timing_ms << "\n";
}

void maybe_export_grid(const std::string& path, const ml_sample* sample,
                       const ml_kde_config& cfg) {
  if (path.empty()) {
    return;
  }
  GridHandle grid;
  check(ml_kde_fit(sample, &cfg, grid.out()));
  check(ml_grid_write_csv(grid, path.c_str()));
}

// ---- sweep sub-seeds -------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Documented derivation: every sweep cell is re-runnable on its own.
std::uint64_t sub_seed(std::uint64_t seed, std::size_t n_post, std::size_t replication) {
  return seed ^ splitmix64(splitmix64(static_cast<std::uint64_t>(n_post)) ^
                           static_cast<std::uint64_t>(replication));
}

// ---- subcommands -----------------------------------------------------------

struct ReproduceFlags {
  std::uint64_t seed = 1702;
  std::size_t n_obs = 25;
  double true_mean = -1.0;
  ModelFlags model;
  std::size_t n_post = 1000;
  KdeFlags kde;
  std::string output = "text";
  std::string export_samples;
  std::string export_data;
  std::string export_grid;
};

void add_reproduce_flags(CLI::App* cmd, ReproduceFlags& flags, bool with_n_post) {
  cmd->add_option("--seed", flags.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--n-obs", flags.n_obs, "Number of observations to simulate")
      ->capture_default_str();
  cmd->add_option("--true-mean", flags.true_mean, "Mean of the simulated observations")
      ->capture_default_str();
  add_model_flags(cmd, flags.model);
  if (with_n_post) {
    cmd->add_option("--n-post", flags.n_post, "Posterior sample size")->capture_default_str();
  }
  add_kde_flags(cmd, flags.kde);
}

void validate_reproduce_flags(const ReproduceFlags& flags, bool with_n_post) {
  if (flags.n_obs < 1) {
    usage_error("--n-obs must be >= 1");
  }
  validate_model_flags(flags.model);
  if (with_n_post && flags.n_post < 2) {
    usage_error("--n-post must be >= 2 (a posterior sample needs at least two draws)");
  }
  validate_kde_flags(flags.kde);
}

int run_reproduce(const ReproduceFlags& flags) {
  validate_reproduce_flags(flags, true);
  const auto start = Clock::now();

  RngHandle rng;
  check(ml_rng_create(flags.seed, rng.out()));
  std::vector<double> observations(flags.n_obs);
  check(ml_rng_normal(rng, flags.true_mean, flags.model.sigma, flags.n_obs,
                      observations.data()));
  DatasetHandle dataset;
  check(ml_dataset_create(observations.data(), observations.size(), dataset.out()));

  const ml_normal_model model = to_model(flags.model);
  double post_mean = 0.0;
  double post_variance = 0.0;
  check(ml_normal_posterior(dataset, &model, &post_mean, &post_variance));

  SampleHandle sample;
  check(ml_sample_exact_posterior(rng, post_mean, post_variance, flags.n_post, sample.out()));

  const ml_kde_config kde_cfg = to_kde_config(flags.kde);
  EstimateHandle estimate;
  check(ml_estimate_kde(dataset, &model, sample, &kde_cfg, estimate.out()));

  double log_theoretical = 0.0;
  check(ml_normal_log_marginal(dataset, &model, &log_theoretical));

  if (!flags.export_samples.empty()) {
    check(ml_sample_write(sample, flags.export_samples.c_str()));
  }
  if (!flags.export_data.empty()) {
    std::FILE* f = std::fopen(flags.export_data.c_str(), "w");
    if (f == nullptr) {
      std::cerr << "E_IO: cannot open '" << flags.export_data << "' for writing\n";
      return 4;
    }
    std::fprintf(f, "# simulated observations\n");
    for (double v : observations) {
      std::fprintf(f, "%.17g\n", v);
    }
    std::fclose(f);
  }
  maybe_export_grid(flags.export_grid, sample, kde_cfg);

  ordered_json config;
  config["command"] = "reproduce";
  config["version"] = ml_version();
  config["seed"] = flags.seed;
  config["n_obs"] = flags.n_obs;
  config["true_mean"] = flags.true_mean;
  config["sigma"] = flags.model.sigma;
  config["theta0"] = flags.model.theta0;
  config["sigma0"] = flags.model.sigma0;
  config["n_post"] = flags.n_post;
  config["kde"] = kde_config_json(flags.kde);
  config["output"] = flags.output;

  ReportBody body;
  body.log_theoretical = log_theoretical;
  body.log_estimate = ml_estimate_log_evidence(estimate);
  body.estimate = estimate;
  emit_estimator_report(config, body, ms_since(start), flags.output);
  return 0;
}

struct EstimateFlags {
  std::string sample_path;
  std::string data_path;
  ModelFlags model;
  KdeFlags kde;
  std::string output = "text";
  std::string export_grid;
};

int run_estimate(const EstimateFlags& flags) {
  validate_model_flags(flags.model);
  validate_kde_flags(flags.kde);
  const auto start = Clock::now();

  SampleHandle sample;
  check(ml_sample_read(flags.sample_path.c_str(), sample.out()));
  DatasetHandle dataset;
  check(ml_dataset_read(flags.data_path.c_str(), dataset.out()));

  const ml_normal_model model = to_model(flags.model);
  const ml_kde_config kde_cfg = to_kde_config(flags.kde);
  EstimateHandle estimate;
  check(ml_estimate_kde(dataset, &model, sample, &kde_cfg, estimate.out()));

  double log_theoretical = 0.0;
  check(ml_normal_log_marginal(dataset, &model, &log_theoretical));

  maybe_export_grid(flags.export_grid, sample, kde_cfg);

  ordered_json config;
  config["command"] = "estimate";
  config["version"] = ml_version();
  config["sample_path"] = flags.sample_path;
  config["data_path"] = flags.data_path;
  config["sigma"] = flags.model.sigma;
  config["theta0"] = flags.model.theta0;
  config["sigma0"] = flags.model.sigma0;
  config["kde"] = kde_config_json(flags.kde);
  config["output"] = flags.output;

  ReportBody body;
  body.log_theoretical = log_theoretical;
  body.log_estimate = ml_estimate_log_evidence(estimate);
  body.estimate = estimate;
  emit_estimator_report(config, body, ms_since(start), flags.output);
  return 0;
}

struct OracleFlags {
  std::string data_path;
  ModelFlags model;
  double half_width_sds = 12.0;
  double abs_tol = 1e-10;
  int max_depth = 40;
  double center = 0.0;
  bool center_set = false;
  double scale = 0.0;
  bool scale_set = false;
  std::string output = "text";
};

int run_oracle(const OracleFlags& flags) {
  validate_model_flags(flags.model);
  if (!(flags.abs_tol > 0.0)) {
    usage_error("--abs-tol must be > 0");
  }
  if (!(flags.half_width_sds > 0.0)) {
    usage_error("--half-width-sds must be > 0");
  }
  if (flags.max_depth < 1) {
    usage_error("--max-depth must be >= 1");
  }
  if (flags.scale_set && !(flags.scale > 0.0)) {
    usage_error("--scale must be > 0");
  }
  const auto start = Clock::now();

  DatasetHandle dataset;
  check(ml_dataset_read(flags.data_path.c_str(), dataset.out()));
  const ml_normal_model model = to_model(flags.model);

  ml_quadrature_config quad_cfg;
  check(ml_quadrature_config_default(dataset, &model, 1, &quad_cfg));
  quad_cfg.half_width_sds = flags.half_width_sds;
  quad_cfg.abs_tol = flags.abs_tol;
  quad_cfg.max_depth = flags.max_depth;
  if (flags.center_set) {
    quad_cfg.center = flags.center;
  }
  if (flags.scale_set) {
    quad_cfg.scale = flags.scale;
  }

  double log_quadrature = 0.0;
  check(ml_quadrature_log_marginal(dataset, &model, &quad_cfg, &log_quadrature));
  double log_closed_form = 0.0;
  check(ml_normal_log_marginal(dataset, &model, &log_closed_form));
  const double abs_difference = std::fabs(log_quadrature - log_closed_form);

  if (flags.output == "json") {
    ordered_json j;
    ordered_json config;
    config["command"] = "oracle";
    config["version"] = ml_version();
    config["data_path"] = flags.data_path;
    config["sigma"] = flags.model.sigma;
    config["theta0"] = flags.model.theta0;
    config["sigma0"] = flags.model.sigma0;
    config["center"] = quad_cfg.center;
    config["scale"] = quad_cfg.scale;
    config["half_width_sds"] = quad_cfg.half_width_sds;
    config["abs_tol"] = quad_cfg.abs_tol;
    config["max_depth"] = quad_cfg.max_depth;
    config["output"] = flags.output;
    j["config"] = config;
    j["log_quadrature"] = log_quadrature;
    j["log_closed_form"] = log_closed_form;
    j["abs_difference"] = abs_difference;
    j["timing_ms"] = ms_since(start);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "log quadrature    " << fmt17(log_quadrature) << "\n";
    std::cout << "log closed form   " << fmt17(log_closed_form) << "\n";
    std::cout << "abs difference    " << fmt17(abs_difference) << "\n";
    std::cout << "time ms           " << ms_since(start) << "\n";
  }
  return 0;
}

struct SweepFlags {
  ReproduceFlags base;
  std::vector<std::size_t> n_post_list = {500, 4000, 32000};
  std::size_t replications = 50;
  std::size_t jobs = 0;  // 0 means hardware concurrency
};

struct SweepRow {
  std::size_t n_post = 0;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  double log_estimate = 0.0;
  double log_theoretical = 0.0;
  double abs_error = 0.0;
  ml_status status = ML_OK;
  std::string error;
};

int run_sweep(const SweepFlags& flags) {
  validate_reproduce_flags(flags.base, false);
  if (flags.n_post_list.empty()) {
    usage_error("--n-post-list must name at least one posterior sample size");
  }
  for (std::size_t n_post : flags.n_post_list) {
    if (n_post < 2) {
      usage_error("--n-post-list entries must be >= 2 (a posterior sample needs at least "
                  "two draws)");
    }
  }
  if (flags.replications < 1) {
    usage_error("--replications must be >= 1");
  }

  // One fixed dataset for the whole sweep, drawn exactly as `reproduce` would.
  RngHandle rng;
  check(ml_rng_create(flags.base.seed, rng.out()));
  std::vector<double> observations(flags.base.n_obs);
  check(ml_rng_normal(rng, flags.base.true_mean, flags.base.model.sigma, flags.base.n_obs,
                      observations.data()));
  DatasetHandle dataset;
  check(ml_dataset_create(observations.data(), observations.size(), dataset.out()));
  const ml_normal_model model = to_model(flags.base.model);
  double post_mean = 0.0;
  double post_variance = 0.0;
  check(ml_normal_posterior(dataset, &model, &post_mean, &post_variance));
  double log_theoretical = 0.0;
  check(ml_normal_log_marginal(dataset, &model, &log_theoretical));

  std::vector<SweepRow> rows;
  for (std::size_t n_post : flags.n_post_list) {
    for (std::size_t rep = 1; rep <= flags.replications; ++rep) {
      SweepRow row;
      row.n_post = n_post;
      row.replication = rep;
      row.seed = sub_seed(flags.base.seed, n_post, rep);
      row.log_theoretical = log_theoretical;
      rows.push_back(row);
    }
  }

  const ml_kde_config kde_cfg = to_kde_config(flags.base.kde);
  const auto run_cell = [&](SweepRow& row) {
    RngHandle cell_rng;
    row.status = ml_rng_create(row.seed, cell_rng.out());
    if (row.status != ML_OK) {
      row.error = ml_last_error();
      return;
    }
    SampleHandle sample;
    row.status =
        ml_sample_exact_posterior(cell_rng, post_mean, post_variance, row.n_post, sample.out());
    if (row.status != ML_OK) {
      row.error = ml_last_error();
      return;
    }
    EstimateHandle estimate;
    row.status = ml_estimate_kde(dataset, &model, sample, &kde_cfg, estimate.out());
    if (row.status != ML_OK) {
      row.error = ml_last_error();
      return;
    }
    row.log_estimate = ml_estimate_log_evidence(estimate);
    row.abs_error = std::fabs(row.log_estimate - row.log_theoretical);
  };

  // Cells are independent (each owns its rng); output stays in cell order.
  std::size_t jobs = flags.jobs != 0 ? flags.jobs
                                     : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, rows.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
        run_cell(rows[i]);
      }
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }

  for (const SweepRow& row : rows) {
    if (row.status != ML_OK) {
      std::cerr << ml_status_name(row.status) << ": " << row.error << " (n_post="
                << row.n_post << " replication=" << row.replication << ")\n";
      return exit_code_for(row.status);
    }
  }

  std::cout << "n_post,replication,seed,log_estimate,log_theoretical,abs_error\n";
  for (const SweepRow& row : rows) {
    std::cout << row.n_post << "," << row.replication << "," << row.seed << ","
              << fmt17(row.log_estimate) << "," << fmt17(row.log_theoretical) << ","
              << fmt17(row.abs_error) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marginal likelihood (model evidence) estimation from posterior samples"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("marglik ") + ml_version());

  ReproduceFlags reproduce_flags;
  auto* reproduce = app.add_subcommand(
      "reproduce", "Simulate data, sample the conjugate posterior, estimate the evidence "
                   "and compare with the closed form");
  add_reproduce_flags(reproduce, reproduce_flags, true);
  reproduce->add_option("--output", reproduce_flags.output, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  reproduce->add_option("--export-samples", reproduce_flags.export_samples,
                        "Write the posterior sample to this path");
  reproduce->add_option("--export-data", reproduce_flags.export_data,
                        "Write the simulated observations to this path");
  reproduce->add_option("--export-grid", reproduce_flags.export_grid,
                        "Write the fitted KDE grid as CSV to this path");

  EstimateFlags estimate_flags;
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate the evidence from an existing posterior sample file");
  estimate->add_option("--sample", estimate_flags.sample_path, "Posterior sample file")
      ->required();
  estimate->add_option("--data", estimate_flags.data_path, "Observed data file")->required();
  add_model_flags(estimate, estimate_flags.model);
  add_kde_flags(estimate, estimate_flags.kde);
  estimate->add_option("--output", estimate_flags.output, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  estimate->add_option("--export-grid", estimate_flags.export_grid,
                       "Write the fitted KDE grid as CSV to this path");

  OracleFlags oracle_flags;
  auto* oracle = app.add_subcommand(
      "oracle", "Evaluate the evidence by adaptive quadrature and compare with the closed "
                "form");
  oracle->add_option("--data", oracle_flags.data_path, "Observed data file")->required();
  add_model_flags(oracle, oracle_flags.model);
  oracle->add_option("--half-width-sds", oracle_flags.half_width_sds,
                     "Integration half width in posterior/prior sds")
      ->capture_default_str();
  oracle->add_option("--abs-tol", oracle_flags.abs_tol, "Quadrature absolute tolerance")
      ->capture_default_str();
  oracle->add_option("--max-depth", oracle_flags.max_depth, "Adaptive recursion limit")
      ->capture_default_str();
  auto* center_opt =
      oracle->add_option("--center", oracle_flags.center,
                         "Integration center (default: posterior mean)");
  auto* scale_opt = oracle->add_option("--scale", oracle_flags.scale,
                                       "Integration scale (default: max(posterior sd, sigma0))");
  oracle->callback([center_opt, scale_opt, &oracle_flags] {
    oracle_flags.center_set = center_opt->count() > 0;
    oracle_flags.scale_set = scale_opt->count() > 0;
  });
  oracle->add_option("--output", oracle_flags.output, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand(
      "sweep", "Replicate the reproduce pipeline across posterior sample sizes on one fixed "
               "dataset; emits CSV");
  add_reproduce_flags(sweep, sweep_flags.base, false);
  sweep->add_option("--n-post-list", sweep_flags.n_post_list,
                    "Comma-separated posterior sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--replications", sweep_flags.replications, "Replications per sample size")
      ->capture_default_str();
  sweep->add_option("--jobs", sweep_flags.jobs,
                    "Parallel workers (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << "E_USAGE: " << e.what() << "\n";
    return 2;
  }

  if (reproduce->parsed()) {
    return run_reproduce(reproduce_flags);
  }
  if (estimate->parsed()) {
    return run_estimate(estimate_flags);
  }
  if (oracle->parsed()) {
    return run_oracle(oracle_flags);
  }
  if (sweep->parsed()) {
    return run_sweep(sweep_flags);
  }
  std::cerr << "E_USAGE: no subcommand given\n";
  return 2;
}
