/*
 * Copyright 2026 The frechet-forest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRECHET_SIMGEN_HPP_
#define FRECHET_SIMGEN_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "frechet/dataset.hpp"
#include "frechet/regressors.hpp"

namespace frechet {

// Synthetic benchmark scenarios: distributions (I-*), SPD matrices (II-*)
// and points on the 2-sphere (III-*).
enum class Scenario { kI1, kI2, kI3, kII1, kII2, kIII1, kIII2 };

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view name);

struct SimSetting {
  Scenario scenario = Scenario::kI1;
  // Published coefficient tables exist for p in {2, 5, 10, 20}.
  int p = 2;
  int n = 100;
  // Noise level; negative selects the scenario default (0.2, or sqrt(0.2)
  // for the SPD settings, whose noise enters as sigma^2).
  double sigma = -1.0;
  // Quantile grid of the distribution settings.
  int grid_size = 21;
  // Metric for the SPD settings: Log-Cholesky or affine-invariant.
  SpaceKind spd_metric = SpaceKind::kSpdLogCholesky;
};

double noise_level(const SimSetting& setting);
MetricSpace setting_space(const SimSetting& setting);

struct Coefficients {
  Eigen::VectorXd beta1;
  Eigen::VectorXd beta2;  // zero-length when the scenario has one vector
};

Coefficients coefficients(Scenario scenario, int p);

// Quantiles of N(mu, sd^2) on the midpoint grid t_j = (2j - 1) / (2m).
Eigen::VectorXd normal_quantile_grid(double mu, double sd, int grid_size);

// sigma^2 Z + m with Z symmetric, N(0, 1) on the diagonal and N(0, 1/2) off it.
Eigen::MatrixXd sym_matrix_normal(const Eigen::MatrixXd& m, double sigma,
                                  std::mt19937_64& rng);

// Regression target at x.
MetricObject regression_function(const SimSetting& setting,
                                 std::span<const double> x);

// n fresh samples (predictors, noisy responses and targets).
Dataset generate(const SimSetting& setting, int n, std::mt19937_64& rng);

// (1/N) sum_i d^2(predictions[i], truths[i]).
double evaluate_mse(std::span<const MetricObject> predictions,
                    std::span<const MetricObject> truths, const MetricSpace& space);

struct MonteCarloOptions {
  int runs = 20;
  int test_size = 100;
  std::uint64_t seed = 0;
  // Cross-validated tuning per run; otherwise `base` is used as is.
  bool tune = true;
  int folds = 5;
  // Template for every estimator; kind is overridden per method.
  EstimatorSpec base;
  // Workers across runs; results are independent of this.
  int threads = 1;
};

struct RunRecord {
  int run = 0;
  EstimatorKind kind = EstimatorKind::kRfwlcfr;
  double mse = 0.0;
  bool failed = false;
  std::string error;
};

struct MethodSummary {
  EstimatorKind kind = EstimatorKind::kRfwlcfr;
  double mean_mse = 0.0;
  // Sample standard deviation over successful runs; 0 for a single run.
  double sd_mse = 0.0;
  int runs = 0;
  int failures = 0;
};

struct MonteCarloResult {
  std::vector<MethodSummary> summary;  // in the order of `kinds`
  std::vector<RunRecord> rows;         // run-major
};

MonteCarloResult monte_carlo(const SimSetting& setting,
                             const std::vector<EstimatorKind>& kinds,
                             const MonteCarloOptions& options);

}  // namespace frechet

#endif  // FRECHET_SIMGEN_HPP_
