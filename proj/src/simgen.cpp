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

#include "frechet/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "frechet/parallel.hpp"
#include "frechet/seed.hpp"

namespace frechet {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinResponseSd = 1e-6;

bool is_distribution(Scenario s) {
  return s == Scenario::kI1 || s == Scenario::kI2 || s == Scenario::kI3;
}
bool is_spd(Scenario s) { return s == Scenario::kII1 || s == Scenario::kII2; }

bool has_two_vectors(Scenario s) {
  return s == Scenario::kI2 || s == Scenario::kII2 || s == Scenario::kIII1 ||
         s == Scenario::kIII2;
}

// (0.1, 0.2, 0.3, 0.4) placed at the start or at the end of a length-p vector.
Eigen::VectorXd ramp(int p, bool at_end) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  for (int k = 0; k < 4; ++k) v[at_end ? p - 4 + k : k] = 0.1 * (k + 1);
  return v;
}

double dot(const Eigen::VectorXd& beta, std::span<const double> x) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) s += beta[j] * x[j];
  return s;
}

// Unit tangent vectors at m from canonical axes, lowest index first.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& m) {
  std::vector<Eigen::Vector3d> basis;
  for (int k = 0; k < 3 && basis.size() < 2; ++k) {
    Eigen::Vector3d v = Eigen::Vector3d::Unit(k);
    v -= v.dot(m) * m;
    for (const Eigen::Vector3d& b : basis) v -= v.dot(b) * b;
    if (v.norm() > 1e-6) basis.push_back(v.normalized());
  }
  return {basis[0], basis[1]};
}

Eigen::Vector3d sphere_point(double polar, double azimuth) {
  return {std::sin(polar) * std::sin(azimuth), std::sin(polar) * std::cos(azimuth),
          std::cos(polar)};
}

// Mean parameters of the distribution settings at x.
std::pair<double, double> location_scale(const SimSetting& setting,
                                         const Coefficients& c,
                                         std::span<const double> x) {
  switch (setting.scenario) {
    case Scenario::kI1:
      return {5.0 * dot(c.beta1, x) - 2.5, 1.0};
    case Scenario::kI2:
      return {std::sin(4.0 * kPi * dot(c.beta1, x)) * (2.0 * dot(c.beta2, x) - 1.0),
              std::max(2.0 * std::abs(x[0] - x[1]), kMinResponseSd)};
    case Scenario::kI3:
      return {0.1 * x[0] * x[0] * (2.0 * dot(c.beta1, x) - 1.0), 1.0};
    default:
      throw DomainError("not a distribution setting");
  }
}

// log D(x) for the SPD settings.
Eigen::MatrixXd log_target(const SimSetting& setting, const Coefficients& c,
                           std::span<const double> x) {
  if (setting.scenario == Scenario::kII1) {
    const double rho = std::cos(4.0 * kPi * dot(c.beta1, x));
    Eigen::Matrix2d m;
    m << 1.0, rho, rho, 1.0;
    return m;
  }
  const double rho1 = 0.8 * std::cos(4.0 * kPi * dot(c.beta1, x));
  const double rho2 = 0.4 * std::cos(4.0 * kPi * dot(c.beta2, x));
  Eigen::Matrix3d m;
  m << 1.0, rho1, rho2, rho1, 1.0, rho1, rho2, rho1, 1.0;
  return m;
}

Eigen::Vector3d sphere_target(const SimSetting& setting, const Coefficients& c,
                              std::span<const double> x) {
  const double a = dot(c.beta1, x);
  const double b = dot(c.beta2, x);
  if (setting.scenario == Scenario::kIII1) {
    if (std::abs(a) > 1.0) throw DomainError("beta1'x outside [-1, 1]");
    const double r = std::sqrt(1.0 - a * a);
    return {r * std::cos(kPi * b), r * std::sin(kPi * b), a};
  }
  return sphere_point(a, b);
}

Eigen::MatrixXd draw_predictors(const SimSetting& setting, int n,
                                std::mt19937_64& rng) {
  Eigen::MatrixXd x(n, setting.p);
  if (setting.scenario == Scenario::kI3) {
    Eigen::MatrixXd cov(setting.p, setting.p);
    for (int i = 0; i < setting.p; ++i) {
      for (int j = 0; j < setting.p; ++j) cov(i, j) = std::pow(0.5, std::abs(i - j));
    }
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
    std::normal_distribution<double> z;
    Eigen::VectorXd draw(setting.p);
    for (int i = 0; i < n; ++i) {
      for (double& v : draw) v = z(rng);
      x.row(i) = (l * draw).transpose();
    }
  } else {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < setting.p; ++j) x(i, j) = u(rng);
    }
  }
  return x;
}

void check_setting(const SimSetting& setting) {
  if (setting.p != 2 && setting.p != 5 && setting.p != 10 && setting.p != 20) {
    throw DomainError("coefficients are published for p in {2, 5, 10, 20}, got " +
                      std::to_string(setting.p));
  }
  if (setting.n < 1) throw DomainError("n must be positive");
  if (setting.grid_size < 1) throw DomainError("grid_size must be positive");
  if (is_spd(setting.scenario) && setting.spd_metric != SpaceKind::kSpdLogCholesky &&
      setting.spd_metric != SpaceKind::kSpdAffineInvariant) {
    throw DomainError("SPD settings need an SPD metric");
  }
}

double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double e : v) ss += (e - mean) * (e - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kI1: return "I-1";
    case Scenario::kI2: return "I-2";
    case Scenario::kI3: return "I-3";
    case Scenario::kII1: return "II-1";
    case Scenario::kII2: return "II-2";
    case Scenario::kIII1: return "III-1";
    case Scenario::kIII2: return "III-2";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::kI1, Scenario::kI2, Scenario::kI3, Scenario::kII1,
                     Scenario::kII2, Scenario::kIII1, Scenario::kIII2}) {
    if (name == to_string(s)) return s;
  }
  throw DomainError("unknown scenario: " + std::string(name));
}

double noise_level(const SimSetting& setting) {
  if (setting.sigma >= 0.0) return setting.sigma;
  return is_spd(setting.scenario) ? std::sqrt(0.2) : 0.2;
}

MetricSpace setting_space(const SimSetting& setting) {
  if (is_distribution(setting.scenario)) {
    return MetricSpace::wasserstein(setting.grid_size);
  }
  if (is_spd(setting.scenario)) {
    const int order = setting.scenario == Scenario::kII1 ? 2 : 3;
    return setting.spd_metric == SpaceKind::kSpdAffineInvariant
               ? MetricSpace::affine_invariant(order)
               : MetricSpace::log_cholesky(order);
  }
  return MetricSpace::sphere(3);
}

Coefficients coefficients(Scenario scenario, int p) {
  Coefficients c;
  if (scenario == Scenario::kIII1 || scenario == Scenario::kIII2) {
    if (p == 2) {
      c.beta1 = Eigen::Vector2d(1.0, 0.0);
      c.beta2 = Eigen::Vector2d(0.0, 1.0);
    } else {
      c.beta1 = ramp(p, false);
      c.beta2 = ramp(p, true);
    }
  } else if (has_two_vectors(scenario)) {
    if (p == 2) {
      c.beta1 = Eigen::Vector2d(0.75, 0.25);
      c.beta2 = Eigen::Vector2d(0.25, 0.75);
    } else {
      c.beta1 = ramp(p, false);
      c.beta2 = ramp(p, true);
    }
  } else if (p == 2) {
    c.beta1 = Eigen::Vector2d(0.75, 0.25);
  } else if (p == 20) {
    c.beta1 = (ramp(p, false) + ramp(p, true)) / 2.0;
  } else {
    c.beta1 = ramp(p, false);
  }
  return c;
}

Eigen::VectorXd normal_quantile_grid(double mu, double sd, int grid_size) {
  static const boost::math::normal_distribution<double> standard;
  Eigen::VectorXd q(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    const double t = (2.0 * j + 1.0) / (2.0 * grid_size);
    q[j] = mu + sd * boost::math::quantile(standard, t);
  }
  return q;
}

Eigen::MatrixXd sym_matrix_normal(const Eigen::MatrixXd& m, double sigma,
                                  std::mt19937_64& rng) {
  if (m.rows() != m.cols() || !is_symmetric(m)) {
    throw DomainError("mean matrix must be symmetric");
  }
  std::normal_distribution<double> diag(0.0, 1.0);
  std::normal_distribution<double> off(0.0, std::sqrt(0.5));
  Eigen::MatrixXd a = m;
  const double scale = sigma * sigma;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double z = i == j ? diag(rng) : off(rng);
      a(i, j) += scale * z;
      if (i != j) a(j, i) = a(i, j);
    }
  }
  return a;
}

MetricObject regression_function(const SimSetting& setting,
                                 std::span<const double> x) {
  check_setting(setting);
  if (static_cast<int>(x.size()) != setting.p) {
    throw DomainError("predictor has the wrong dimension");
  }
  const Coefficients c = coefficients(setting.scenario, setting.p);
  if (is_distribution(setting.scenario)) {
    const auto [mu, sd] = location_scale(setting, c, x);
    return QuantileObject{normal_quantile_grid(mu, sd, setting.grid_size)};
  }
  if (is_spd(setting.scenario)) {
    return SpdObject{matrix_exp(log_target(setting, c, x))};
  }
  return SphereObject{Eigen::VectorXd(sphere_target(setting, c, x))};
}

Dataset generate(const SimSetting& setting, int n, std::mt19937_64& rng) {
  check_setting(setting);
  const Coefficients c = coefficients(setting.scenario, setting.p);
  const double sigma = noise_level(setting);
  Dataset data;
  data.space = setting_space(setting);
  data.x = draw_predictors(setting, n, rng);
  data.y.reserve(n);
  data.truth.reserve(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::VectorXd xi(setting.p);
  for (int i = 0; i < n; ++i) {
    xi = data.x.row(i).transpose();
    const std::span<const double> x = row_span(xi);
    if (is_distribution(setting.scenario)) {
      const auto [mu, sd] = location_scale(setting, c, x);
      const double drawn = mu + sigma * noise(rng);
      data.y.push_back(QuantileObject{normal_quantile_grid(drawn, sd, setting.grid_size)});
      data.truth.push_back(QuantileObject{normal_quantile_grid(mu, sd, setting.grid_size)});
    } else if (is_spd(setting.scenario)) {
      const Eigen::MatrixXd log_d = log_target(setting, c, x);
      Eigen::MatrixXd y = matrix_exp(sym_matrix_normal(log_d, sigma, rng));
      data.y.push_back(SpdObject{0.5 * (y + y.transpose())});
      data.truth.push_back(SpdObject{matrix_exp(log_d)});
    } else if (setting.scenario == Scenario::kIII1) {
      const Eigen::Vector3d m = sphere_target(setting, c, x);
      const auto [v1, v2] = tangent_basis(m);
      const double d1 = sigma * noise(rng);
      const double d2 = sigma * noise(rng);
      const Eigen::VectorXd eps = d1 * v1 + d2 * v2;
      data.y.push_back(SphereObject{sphere_exp(m, eps)});
      data.truth.push_back(SphereObject{Eigen::VectorXd(m)});
    } else {
      const double a = dot(c.beta1, x);
      const double b = dot(c.beta2, x);
      const double e1 = sigma * noise(rng);
      const double e2 = sigma * noise(rng);
      data.y.push_back(SphereObject{Eigen::VectorXd(sphere_point(a + e1, b + e2))});
      data.truth.push_back(SphereObject{Eigen::VectorXd(sphere_point(a, b))});
    }
  }
  return data;
}

double evaluate_mse(std::span<const MetricObject> predictions,
                    std::span<const MetricObject> truths, const MetricSpace& space) {
  if (predictions.size() != truths.size()) {
    throw DomainError("predictions and truths differ in length");
  }
  if (predictions.empty()) throw DomainError("no predictions to evaluate");
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total += squared_distance(space, predictions[i], truths[i]);
  }
  return total / static_cast<double>(predictions.size());
}

MonteCarloResult monte_carlo(const SimSetting& setting,
                             const std::vector<EstimatorKind>& kinds,
                             const MonteCarloOptions& options) {
  check_setting(setting);
  if (options.runs < 1) throw DomainError("runs must be at least 1");
  if (options.test_size < 1) throw DomainError("test_size must be positive");
  if (kinds.empty()) throw DomainError("no estimators requested");
  const int num_kinds = static_cast<int>(kinds.size());
  std::vector<RunRecord> rows(static_cast<std::size_t>(options.runs) * num_kinds);

  parallel_for(options.runs, options.threads, [&](int run) {
    std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(run)));
    auto train = std::make_shared<const Dataset>(generate(setting, setting.n, rng));
    const Dataset test = generate(setting, options.test_size, rng);
    const std::uint64_t fold_seed = rng();
    EstimatorSpec base = options.base;
    base.forest.master_seed = rng();
    base.forest.threads = 1;

    std::vector<std::optional<EstimatorSpec>> specs(num_kinds);
    std::vector<std::string> errors(num_kinds);
    std::vector<EstimatorKind> forest_kinds;
    for (EstimatorKind k : kinds) {
      if (is_forest_kind(k)) forest_kinds.push_back(k);
    }
    std::vector<TuningResult> forest_tuning;
    if (options.tune && !forest_kinds.empty()) {
      try {
        forest_tuning = tune_cv_forest_kinds(
            *train, base, forest_kinds,
            default_grid(EstimatorKind::kRfwlcfr, setting.n, setting.p),
            options.folds, fold_seed);
      } catch (const std::exception& e) {
        for (int k = 0; k < num_kinds; ++k) {
          if (is_forest_kind(kinds[k])) errors[k] = e.what();
        }
      }
    }
    for (int k = 0; k < num_kinds; ++k) {
      EstimatorSpec spec = base;
      spec.kind = kinds[k];
      if (!options.tune || kinds[k] == EstimatorKind::kGfr) {
        specs[k] = spec;
      } else if (is_forest_kind(kinds[k])) {
        const auto at = std::find(forest_kinds.begin(), forest_kinds.end(), kinds[k]);
        if (!forest_tuning.empty()) {
          specs[k] = forest_tuning[at - forest_kinds.begin()].best_spec;
        }
      } else {
        try {
          specs[k] = tune_cv(*train, spec,
                             default_grid(kinds[k], setting.n, setting.p),
                             options.folds, fold_seed)
                         .best_spec;
        } catch (const std::exception& e) {
          errors[k] = e.what();
        }
      }
    }

    // Forest kinds tuned to the same cell share one fitted forest.
    std::map<std::pair<int, int>, std::shared_ptr<const RegressionModel>> forests;
    for (int k = 0; k < num_kinds; ++k) {
      RunRecord& row = rows[static_cast<std::size_t>(run) * num_kinds + k];
      row.run = run;
      row.kind = kinds[k];
      try {
        if (!specs[k]) throw DomainError(errors[k]);
        std::shared_ptr<const RegressionModel> model;
        if (is_forest_kind(kinds[k])) {
          const std::pair<int, int> key{specs[k]->forest.tree.max_depth,
                                        specs[k]->forest.tree.mtry};
          auto& slot = forests[key];
          if (!slot) {
            slot = std::make_shared<const RegressionModel>(
                RegressionModel::fit(*specs[k], train));
          }
          model = slot;
        } else {
          model = std::make_shared<const RegressionModel>(
              RegressionModel::fit(*specs[k], train));
        }
        std::vector<MetricObject> predictions;
        predictions.reserve(test.size());
        Eigen::VectorXd xi;
        for (int i = 0; i < test.size(); ++i) {
          xi = test.x.row(i).transpose();
          predictions.push_back(model->predict_as(kinds[k], row_span(xi)).value);
        }
        row.mse = evaluate_mse(predictions, test.truth, test.space);
      } catch (const std::exception& e) {
        row.failed = true;
        row.mse = std::numeric_limits<double>::quiet_NaN();
        row.error = e.what();
      }
    }
  });

  MonteCarloResult result;
  result.rows = std::move(rows);
  for (int k = 0; k < num_kinds; ++k) {
    MethodSummary s;
    s.kind = kinds[k];
    std::vector<double> values;
    for (int run = 0; run < options.runs; ++run) {
      const RunRecord& row = result.rows[static_cast<std::size_t>(run) * num_kinds + k];
      if (row.failed) {
        ++s.failures;
      } else {
        values.push_back(row.mse);
      }
    }
    s.runs = static_cast<int>(values.size());
    if (!values.empty()) {
      double total = 0.0;
      for (double v : values) total += v;
      s.mean_mse = total / static_cast<double>(values.size());
      s.sd_mse = sample_sd(values, s.mean_mse);
    } else {
      s.mean_mse = std::numeric_limits<double>::quiet_NaN();
      s.sd_mse = std::numeric_limits<double>::quiet_NaN();
    }
    result.summary.push_back(s);
  }
  return result;
}

}  // namespace frechet
