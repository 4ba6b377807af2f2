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

#include "frechet/frechet_mean.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace frechet {
namespace {

using testing::random_object;

double objective(const MetricSpace& s, const std::vector<MetricObject>& pts,
                 const std::vector<double>& w, const MetricObject& y) {
  return frechet_objective(s, pts, w, y);
}

TEST(FrechetObjectiveTest, Basics) {
  std::mt19937_64 rng(1);
  const MetricSpace s = MetricSpace::sphere();
  std::vector<MetricObject> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(random_object(rng, s));
  EXPECT_EQ(objective(s, pts, std::vector<double>(6, 0.0), pts[0]), 0.0);
  EXPECT_EQ(objective(s, {pts[2]}, {1.0}, pts[2]), 0.0);
  std::vector<double> w(6);
  double direct = 0.0;
  for (int i = 0; i < 6; ++i) {
    w[i] = testing::uniform(rng, -1, 2);
    const double d = testing::oracle_sphere(std::get<SphereObject>(pts[i]).coords,
                                            std::get<SphereObject>(pts[0]).coords);
    direct += w[i] * d * d;
  }
  EXPECT_NEAR(objective(s, pts, w, pts[0]), direct, 1e-12);
  EXPECT_THROW(objective(s, pts, {1.0}, pts[0]), DomainError);
}

TEST(WeightedMeanTest, SinglePoint) {
  std::mt19937_64 rng(2);
  for (const MetricSpace& s :
       {MetricSpace::wasserstein(5), MetricSpace::log_cholesky(2),
        MetricSpace::affine_invariant(2), MetricSpace::sphere()}) {
    const MetricObject a = random_object(rng, s);
    const MeanResult r = weighted_frechet_mean(s, std::vector<MetricObject>{a},
                                               std::vector<double>{1.0});
    EXPECT_LT(distance(s, r.value, a), 1e-9) << to_string(s.kind);
  }
}

TEST(WeightedMeanTest, SphereMidpoint) {
  const MetricSpace s = MetricSpace::sphere();
  const std::vector<MetricObject> pts{SphereObject{Eigen::Vector3d(1, 0, 0)},
                                      SphereObject{Eigen::Vector3d(0, 1, 0)}};
  const MeanResult r = weighted_frechet_mean(s, pts, std::vector<double>{1.0, 1.0});
  const Eigen::Vector3d expected(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0);
  EXPECT_LT((std::get<SphereObject>(r.value).coords - expected).norm(), 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(WeightedMeanTest, AffineInvariantGeodesicMidpoint) {
  const MetricSpace s = MetricSpace::affine_invariant(2);
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  const std::vector<MetricObject> pts{SpdObject{i2}, SpdObject{std::exp(2.0) * i2}};
  const MeanResult r = weighted_frechet_mean(s, pts, std::vector<double>{1.0, 1.0});
  EXPECT_LT((std::get<SpdObject>(r.value).matrix - std::exp(1.0) * i2).norm(), 1e-9);
}

TEST(WeightedMeanTest, SphereBeatsFibonacciGrid) {
  std::mt19937_64 rng(3);
  const MetricSpace s = MetricSpace::sphere();
  const auto grid = testing::fibonacci_sphere(100000);
  for (int t = 0; t < 5; ++t) {
    const Eigen::Vector3d center = testing::random_unit(rng);
    std::vector<MetricObject> pts;
    std::vector<double> w;
    for (int i = 0; i < 5; ++i) {
      pts.push_back(SphereObject{Eigen::VectorXd(testing::random_in_cap(rng, center, 1.0))});
      w.push_back(testing::uniform(rng, 0.1, 1.0));
    }
    const MeanResult r = weighted_frechet_mean(s, pts, w);
    double best = INFINITY;
    for (const Eigen::Vector3d& g : grid) {
      best = std::min(best, objective(s, pts, w, SphereObject{Eigen::VectorXd(g)}));
    }
    EXPECT_LE(objective(s, pts, w, r.value), best + 1e-3);
  }
}

TEST(WeightedMeanTest, EmbeddedMeansMinimizeOverInputs) {
  std::mt19937_64 rng(4);
  for (const MetricSpace& s : {MetricSpace::wasserstein(21), MetricSpace::log_cholesky(3)}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<MetricObject> pts;
      std::vector<double> w;
      for (int i = 0; i < 8; ++i) {
        pts.push_back(random_object(rng, s));
        w.push_back(testing::uniform(rng, 0.0, 1.0));
      }
      const MeanResult r = weighted_frechet_mean(s, pts, w);
      const double at_mean = objective(s, pts, w, r.value);
      for (const MetricObject& p : pts) ASSERT_LE(at_mean, objective(s, pts, w, p) + 1e-12);
    }
  }
}

TEST(WeightedMeanTest, EmbeddedMeanIsEuclideanAverage) {
  // The minimizer of sum w_i |e_i - e|^2 is the weighted average; check that
  // perturbing the returned embedding in any direction does not help.
  std::mt19937_64 rng(5);
  const MetricSpace s = MetricSpace::log_cholesky(2);
  std::vector<MetricObject> pts;
  std::vector<double> w;
  for (int i = 0; i < 6; ++i) {
    pts.push_back(random_object(rng, s));
    w.push_back(testing::uniform(rng, -0.2, 1.0));
  }
  const MeanResult r = weighted_frechet_mean(s, pts, w);
  const Eigen::VectorXd e = embed(s, r.value);
  const double base = objective(s, pts, w, r.value);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd moved = e + 1e-3 * testing::random_vector(rng, e.size());
    EXPECT_GE(objective(s, pts, w, unembed(s, moved)), base - 1e-10);
  }
}

TEST(WeightedMeanTest, QuantileMeanScaleInvariant) {
  std::mt19937_64 rng(6);
  const MetricSpace s = MetricSpace::wasserstein(21);
  std::vector<MetricObject> pts;
  std::vector<double> w, w3;
  for (int i = 0; i < 7; ++i) {
    pts.push_back(random_object(rng, s));
    w.push_back(testing::uniform(rng, 0.0, 1.0));
    w3.push_back(3.0 * w.back());
  }
  EXPECT_LT(distance(s, weighted_frechet_mean(s, pts, w).value,
                     weighted_frechet_mean(s, pts, w3).value),
            1e-12);
}

TEST(WeightedMeanTest, SignedQuantileMeanStaysMonotone) {
  std::mt19937_64 rng(7);
  const MetricSpace s = MetricSpace::wasserstein(21);
  std::vector<MetricObject> pts;
  for (int i = 0; i < 3; ++i) pts.push_back(random_object(rng, s));
  const MeanResult r = weighted_frechet_mean(s, pts, std::vector<double>{2.0, -1.5, 0.5});
  EXPECT_NO_THROW(validate(s, r.value));
}

TEST(WeightedMeanTest, Errors) {
  const MetricSpace s = MetricSpace::sphere();
  const std::vector<MetricObject> pts{SphereObject{Eigen::Vector3d(1, 0, 0)},
                                      SphereObject{Eigen::Vector3d(0, 1, 0)}};
  EXPECT_THROW(weighted_frechet_mean(s, pts, std::vector<double>{0.0, 0.0}), DomainError);
  EXPECT_THROW(weighted_frechet_mean(s, pts, std::vector<double>{1.0, -2.0}), DomainError);
}

TEST(WeightedMeanTest, SubsetOverloadCountsRepeats) {
  const MetricSpace s = MetricSpace::wasserstein(1);
  const std::vector<MetricObject> pts{QuantileObject{Eigen::VectorXd::Constant(1, 0.0)},
                                      QuantileObject{Eigen::VectorXd::Constant(1, 3.0)}};
  const std::vector<int> subset{0, 1, 1};
  EXPECT_NEAR(testing::scalar(frechet_mean(s, pts, subset).value), 2.0, 1e-15);
}

}  // namespace
}  // namespace frechet
