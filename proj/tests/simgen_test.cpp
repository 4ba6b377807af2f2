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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace frechet {
namespace {

constexpr double kPi = std::numbers::pi;

// Standard normal quantile by bisection on the error function.
double oracle_probit(double t) {
  double lo = -40, hi = 40;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::sqrt(2.0)) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SimSetting setting(Scenario s, int p = 2, double sigma = -1.0) {
  SimSetting out;
  out.scenario = s;
  out.p = p;
  out.sigma = sigma;
  return out;
}

const std::vector<Scenario> kAllScenarios{Scenario::kI1,  Scenario::kI2,   Scenario::kI3,
                                          Scenario::kII1, Scenario::kII2,  Scenario::kIII1,
                                          Scenario::kIII2};

TEST(ScenarioTest, NamesRoundTrip) {
  for (Scenario s : kAllScenarios) EXPECT_EQ(parse_scenario(to_string(s)), s);
  EXPECT_EQ(to_string(Scenario::kIII2), "III-2");
  EXPECT_THROW(parse_scenario("IV-1"), DomainError);
}

TEST(CoefficientsTest, PublishedTables) {
  EXPECT_EQ(coefficients(Scenario::kI1, 2).beta1, Eigen::Vector2d(0.75, 0.25));
  const Eigen::VectorXd b5 = coefficients(Scenario::kI1, 5).beta1;
  EXPECT_LT((b5 - (Eigen::VectorXd(5) << 0.1, 0.2, 0.3, 0.4, 0).finished()).norm(), 1e-15);
  const Eigen::VectorXd b20 = coefficients(Scenario::kI1, 20).beta1;
  EXPECT_DOUBLE_EQ(b20[0], 0.05);
  EXPECT_DOUBLE_EQ(b20[19], 0.2);
  EXPECT_DOUBLE_EQ(b20.sum(), 1.0);
  const Coefficients i2 = coefficients(Scenario::kI2, 10);
  EXPECT_DOUBLE_EQ(i2.beta1[3], 0.4);
  EXPECT_DOUBLE_EQ(i2.beta2[6], 0.1);
  EXPECT_DOUBLE_EQ(i2.beta2[9], 0.4);
  EXPECT_EQ(coefficients(Scenario::kIII1, 2).beta1, Eigen::Vector2d(1, 0));
  EXPECT_EQ(coefficients(Scenario::kIII2, 2).beta2, Eigen::Vector2d(0, 1));
  std::mt19937_64 rng(0);
  EXPECT_THROW(generate(setting(Scenario::kI1, 3), 10, rng), DomainError);
}

TEST(NoiseLevelTest, Defaults) {
  EXPECT_DOUBLE_EQ(noise_level(setting(Scenario::kI2)), 0.2);
  EXPECT_DOUBLE_EQ(noise_level(setting(Scenario::kIII1)), 0.2);
  EXPECT_DOUBLE_EQ(noise_level(setting(Scenario::kII1)), std::sqrt(0.2));
  EXPECT_DOUBLE_EQ(noise_level(setting(Scenario::kI1, 2, 0.5)), 0.5);
}

TEST(QuantileGridTest, MatchesBisectionOracle) {
  const Eigen::VectorXd q = normal_quantile_grid(1.5, 2.0, 21);
  for (int j = 0; j < 21; ++j) {
    EXPECT_NEAR(q[j], 1.5 + 2.0 * oracle_probit((2.0 * j + 1) / 42.0), 1e-9);
  }
  EXPECT_DOUBLE_EQ(q[10], 1.5);
}

TEST(GenerateTest, DistributionSettingsWithoutNoise) {
  std::mt19937_64 rng(1);
  const Dataset d = generate(setting(Scenario::kI1, 2, 0.0), 50, rng);
  for (int i = 0; i < 50; ++i) {
    const double mu = 5 * (0.75 * d.x(i, 0) + 0.25 * d.x(i, 1)) - 2.5;
    const Eigen::VectorXd& y = std::get<QuantileObject>(d.y[i]).values;
    EXPECT_NEAR(y[10], mu, 1e-12);
    EXPECT_LT((y - std::get<QuantileObject>(d.truth[i]).values).cwiseAbs().maxCoeff(), 1e-15);
    validate(d.space, d.y[i]);
  }
}

TEST(GenerateTest, DegenerateSpreadIsClamped) {
  const Eigen::Vector2d x(0.3, 0.3);
  const auto q = std::get<QuantileObject>(
      regression_function(setting(Scenario::kI2), row_span(Eigen::VectorXd(x))));
  const double spread = q.values[20] - q.values[0];
  EXPECT_GT(spread, 0.0);
  EXPECT_NEAR(spread, 2e-6 * oracle_probit(41.0 / 42), 1e-12);
}

TEST(GenerateTest, I2Truth) {
  const Eigen::Vector2d x(0.2, 0.7);
  const double mu = std::sin(4 * kPi * (0.75 * 0.2 + 0.25 * 0.7)) * (2 * (0.25 * 0.2 + 0.75 * 0.7) - 1);
  const auto q = std::get<QuantileObject>(
      regression_function(setting(Scenario::kI2), row_span(Eigen::VectorXd(x))));
  for (int j = 0; j < 21; ++j) {
    EXPECT_NEAR(q.values[j], mu + 1.0 * oracle_probit((2.0 * j + 1) / 42.0), 1e-9);
  }
}

TEST(GenerateTest, I3PredictorsHaveAutoregressiveCovariance) {
  std::mt19937_64 rng(2);
  const Dataset d = generate(setting(Scenario::kI3, 5), 40000, rng);
  const Eigen::MatrixXd centered = d.x.rowwise() - d.x.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / 40000.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(cov(i, j), std::pow(0.5, std::abs(i - j)), 0.03);
  }
}

// Responses average to the target: the mean of Y - truth in the embedding
// vanishes over 10^6 draws.
TEST(GenerateTest, DistributionTruthIsTheConditionalMean) {
  for (Scenario s : {Scenario::kI1, Scenario::kI2}) {
    std::mt19937_64 rng(3);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(21);
    const int chunks = 10, per_chunk = 100000;
    for (int c = 0; c < chunks; ++c) {
      const Dataset d = generate(setting(s), per_chunk, rng);
      for (int i = 0; i < per_chunk; ++i) {
        total += std::get<QuantileObject>(d.y[i]).values -
                 std::get<QuantileObject>(d.truth[i]).values;
      }
    }
    EXPECT_LT((total / (chunks * per_chunk)).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(GenerateTest, LawOfLargeNumbersAudit) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  for (Scenario s : {Scenario::kI1, Scenario::kI2}) {
    const SimSetting st = setting(s);
    const Eigen::Vector2d x(0.35, 0.8);
    const MetricObject truth = regression_function(st, row_span(Eigen::VectorXd(x)));
    const Eigen::VectorXd& base = std::get<QuantileObject>(truth).values;
    // The response law at x: the target grid shifted by N(0, sigma^2).
    std::vector<MetricObject> draws;
    draws.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
      draws.push_back(QuantileObject{(base.array() + 0.2 * z(rng)).matrix()});
    }
    const MetricSpace space = setting_space(st);
    const std::vector<double> uniform(draws.size(), 1.0);
    EXPECT_LT(distance(space, weighted_frechet_mean(space, draws, uniform).value, truth), 0.01);
  }
}

TEST(SymMatrixNormalTest, ZeroNoiseAndValidation) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd m = testing::random_symmetric(rng, 3);
  EXPECT_EQ(sym_matrix_normal(m, 0.0, rng), m);
  Eigen::Matrix2d bad;
  bad << 1, 2, 3, 4;
  EXPECT_THROW(sym_matrix_normal(bad, 1.0, rng), DomainError);
}

TEST(SymMatrixNormalTest, Moments) {
  std::mt19937_64 rng(6);
  const double sigma = 0.8;
  const int draws = 100000;
  const Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  double diag = 0, diag2 = 0, off = 0, off2 = 0;
  for (int k = 0; k < draws; ++k) {
    const Eigen::MatrixXd a = sym_matrix_normal(m, sigma, rng);
    EXPECT_EQ(a(0, 2), a(2, 0));
    diag += a(1, 1) - 1;
    diag2 += std::pow(a(1, 1) - 1, 2);
    off += a(0, 2);
    off2 += std::pow(a(0, 2), 2);
  }
  const double var_diag = diag2 / draws - std::pow(diag / draws, 2);
  const double var_off = off2 / draws - std::pow(off / draws, 2);
  const double s4 = std::pow(sigma, 4);
  EXPECT_NEAR(var_diag / s4, 1.0, 0.05);
  EXPECT_NEAR(var_off / (s4 / 2), 1.0, 0.05);
}

TEST(GenerateTest, SpdSettings) {
  std::mt19937_64 rng(7);
  for (Scenario s : {Scenario::kII1, Scenario::kII2}) {
    for (double sigma : {0.0, -1.0}) {
      for (SpaceKind metric : {SpaceKind::kSpdLogCholesky, SpaceKind::kSpdAffineInvariant}) {
        SimSetting st = setting(s, 5, sigma);
        st.spd_metric = metric;
        const Dataset d = generate(st, 40, rng);
        EXPECT_EQ(d.space.kind, metric);
        for (int i = 0; i < 40; ++i) {
          validate(d.space, d.y[i]);
          if (sigma == 0.0) {
            EXPECT_LT(distance(d.space, d.y[i], d.truth[i]), 1e-10);
          }
        }
      }
    }
  }
}

TEST(GenerateTest, SpdTargetClosedForm) {
  const Eigen::Vector2d x(0, 0);
  const auto d = std::get<SpdObject>(
      regression_function(setting(Scenario::kII1), row_span(Eigen::VectorXd(x))));
  // exp of the all-ones block: eigenvalues e^2 and 1 on (1, 1) and (1, -1).
  const double e2 = std::exp(2.0);
  Eigen::Matrix2d expected;
  expected << e2 + 1, e2 - 1, e2 - 1, e2 + 1;
  expected *= 0.5;
  EXPECT_LT((d.matrix - expected).cwiseAbs().maxCoeff(), 1e-12);

  // II-2 target: exp of the correlation-type block, by eigendecomposition.
  const Eigen::Vector2d y(0.3, 0.6);
  const double r1 = 0.8 * std::cos(4 * kPi * (0.75 * 0.3 + 0.25 * 0.6));
  const double r2 = 0.4 * std::cos(4 * kPi * (0.25 * 0.3 + 0.75 * 0.6));
  Eigen::Matrix3d block;
  block << 1, r1, r2, r1, 1, r1, r2, r1, 1;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(block);
  const Eigen::Matrix3d oracle = eig.eigenvectors() *
                                 eig.eigenvalues().array().exp().matrix().asDiagonal() *
                                 eig.eigenvectors().transpose();
  const auto d2 = std::get<SpdObject>(
      regression_function(setting(Scenario::kII2), row_span(Eigen::VectorXd(y))));
  EXPECT_LT((d2.matrix - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GenerateTest, SphereTargets) {
  const Eigen::Vector2d origin(0, 0);
  const auto m = std::get<SphereObject>(
      regression_function(setting(Scenario::kIII1), row_span(Eigen::VectorXd(origin))));
  EXPECT_LT((m.coords - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Vector2d x(testing::uniform(rng), testing::uniform(rng));
    const auto a = std::get<SphereObject>(
        regression_function(setting(Scenario::kIII1), row_span(Eigen::VectorXd(x))));
    const double r = std::sqrt(1 - x[0] * x[0]);
    EXPECT_LT((a.coords - Eigen::Vector3d(r * std::cos(kPi * x[1]), r * std::sin(kPi * x[1]), x[0]))
                  .norm(),
              1e-14);
    const auto b = std::get<SphereObject>(
        regression_function(setting(Scenario::kIII2), row_span(Eigen::VectorXd(x))));
    const Eigen::Vector3d expected(std::sin(x[0]) * std::sin(x[1]),
                                   std::sin(x[0]) * std::cos(x[1]), std::cos(x[0]));
    EXPECT_LT((b.coords - expected).norm(), 1e-14);
  }
}

TEST(GenerateTest, SphereSettings) {
  std::mt19937_64 rng(9);
  for (Scenario s : {Scenario::kIII1, Scenario::kIII2}) {
    for (int p : {2, 5, 10, 20}) {
      const Dataset noiseless = generate(setting(s, p, 0.0), 30, rng);
      const Dataset noisy = generate(setting(s, p), 30, rng);
      for (int i = 0; i < 30; ++i) {
        EXPECT_LT(distance(noiseless.space, noiseless.y[i], noiseless.truth[i]), 1e-12);
        EXPECT_NEAR(std::get<SphereObject>(noisy.y[i]).coords.norm(), 1.0, 1e-10);
        EXPECT_NEAR(std::get<SphereObject>(noisy.truth[i]).coords.norm(), 1.0, 1e-10);
      }
    }
  }
}

TEST(GenerateTest, TangentNoiseHasTheStatedScale) {
  std::mt19937_64 rng(10);
  const Dataset d = generate(setting(Scenario::kIII1), 50000, rng);
  double ss = 0;
  for (int i = 0; i < 50000; ++i) {
    const Eigen::VectorXd& m = std::get<SphereObject>(d.truth[i]).coords;
    const Eigen::VectorXd v = sphere_log(m, std::get<SphereObject>(d.y[i]).coords);
    EXPECT_LT(std::abs(v.dot(m)), 1e-10);
    ss += v.squaredNorm();
  }
  // Two independent N(0, 0.2^2) tangent coordinates.
  EXPECT_NEAR(ss / 50000 / 0.08, 1.0, 0.03);
}

TEST(GenerateTest, Deterministic) {
  for (Scenario s : kAllScenarios) {
    std::mt19937_64 a(11), b(11);
    const Dataset da = generate(setting(s), 20, a);
    const Dataset db = generate(setting(s), 20, b);
    EXPECT_EQ(da.x, db.x);
    for (int i = 0; i < 20; ++i) {
      EXPECT_EQ(serialize(da.space, da.y[i]), serialize(db.space, db.y[i]));
    }
  }
}

TEST(EvaluateMseTest, Examples) {
  std::vector<MetricObject> truth, pred;
  for (int i = 0; i < 100; ++i) {
    truth.push_back(QuantileObject{Eigen::VectorXd::Constant(1, i)});
    pred.push_back(truth.back());
  }
  const MetricSpace space = MetricSpace::wasserstein(1);
  EXPECT_EQ(evaluate_mse(pred, truth, space), 0.0);
  pred[37] = QuantileObject{Eigen::VectorXd::Constant(1, 38)};
  EXPECT_DOUBLE_EQ(evaluate_mse(pred, truth, space), 0.01);
  pred.pop_back();
  EXPECT_THROW(evaluate_mse(pred, truth, space), DomainError);
}

TEST(EvaluateMseTest, MatchesDirectSummation) {
  std::mt19937_64 rng(12);
  const MetricSpace space = MetricSpace::sphere();
  std::vector<MetricObject> a, b;
  double total = 0;
  for (int i = 0; i < 100; ++i) {
    a.push_back(SphereObject{testing::random_unit(rng)});
    b.push_back(SphereObject{testing::random_unit(rng)});
    total += std::pow(testing::oracle_sphere(std::get<SphereObject>(a[i]).coords,
                                             std::get<SphereObject>(b[i]).coords),
                      2);
  }
  EXPECT_NEAR(evaluate_mse(a, b, space), total / 100, 1e-12);
}

MonteCarloOptions quick_options(int runs) {
  MonteCarloOptions o;
  o.runs = runs;
  o.test_size = 30;
  o.seed = 5;
  o.tune = false;
  o.base.forest.num_trees = 10;
  o.base.forest.tree.max_depth = 3;
  return o;
}

TEST(MonteCarloTest, SingleRunHasZeroSd) {
  SimSetting st = setting(Scenario::kI2);
  st.n = 60;
  const std::vector<EstimatorKind> kinds{EstimatorKind::kGfr, EstimatorKind::kRfwlcfr};
  const MonteCarloResult r = monte_carlo(st, kinds, quick_options(1));
  ASSERT_EQ(r.summary.size(), 2u);
  ASSERT_EQ(r.rows.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(r.summary[k].kind, kinds[k]);
    EXPECT_EQ(r.summary[k].runs, 1);
    EXPECT_EQ(r.summary[k].sd_mse, 0.0);
    EXPECT_EQ(r.summary[k].mean_mse, r.rows[k].mse);
  }
}

TEST(MonteCarloTest, SummaryAggregatesRows) {
  SimSetting st = setting(Scenario::kIII2);
  st.n = 50;
  const std::vector<EstimatorKind> kinds{EstimatorKind::kRfwlcfr, EstimatorKind::kFrf};
  MonteCarloOptions o = quick_options(4);
  const MonteCarloResult a = monte_carlo(st, kinds, o);
  o.threads = 3;
  const MonteCarloResult b = monte_carlo(st, kinds, o);
  ASSERT_EQ(a.rows.size(), 8u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].mse, b.rows[i].mse);
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    std::vector<double> v;
    for (const RunRecord& row : a.rows) {
      if (row.kind == kinds[k]) v.push_back(row.mse);
    }
    double mean = 0;
    for (double e : v) mean += e / v.size();
    double ss = 0;
    for (double e : v) ss += (e - mean) * (e - mean);
    EXPECT_NEAR(a.summary[k].mean_mse, mean, 1e-15);
    EXPECT_NEAR(a.summary[k].sd_mse, std::sqrt(ss / (v.size() - 1)), 1e-15);
    EXPECT_EQ(a.summary[k].failures, 0);
  }
  EXPECT_THROW(monte_carlo(st, kinds, quick_options(0)), DomainError);
}

}  // namespace
}  // namespace frechet
