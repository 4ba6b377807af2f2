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

// One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "frechet/cli.hpp"
#include "frechet/regressors.hpp"
#include "frechet/simgen.hpp"
#include "../test_util.hpp"

namespace frechet {
namespace {

namespace fs = std::filesystem;
using testing::scalar;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

Eigen::VectorXd uniform_point(std::mt19937_64& rng, int p, double lo = 0.2, double hi = 0.8) {
  Eigen::VectorXd q(p);
  for (int j = 0; j < p; ++j) q[j] = testing::uniform(rng, lo, hi);
  return q;
}

// --- 1 ----------------------------------------------------------------------

Outcome euclidean_degeneration() {
  double worst = 0;
  for (int instance = 0; instance < 50; ++instance) {
    std::mt19937_64 rng(1000 + instance);
    const int p = 1 + instance % 3;
    const int n = 60 + 10 * (instance % 5);
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) x(i, j) = testing::uniform(rng);
      y[i] = std::sin(3 * x(i, 0)) + x.row(i).sum() + 0.2 * testing::gaussian(rng);
    }
    auto data = std::make_shared<const Dataset>(testing::scalar_dataset(x, y));
    ForestConfig config;
    config.num_trees = 30;
    config.tree.max_depth = 3;
    config.tree.min_leaf = 5;
    config.master_seed = instance;
    const ForestModel forest = fit_forest(data, config);
    const GfrModel gfr = fit_gfr(data);
    const Eigen::VectorXd q = uniform_point(rng, p);
    const auto qs = row_span(q);
    const double h = 0.5;

    const WeightVector alpha = kernel_weights(forest, qs);
    const Eigen::VectorXd k = testing::oracle_kernel(x, q, h, false);
    const double errors[] = {
        std::abs(scalar(predict_rfwlcfr(forest, qs).value) - alpha.dot(y)),
        std::abs(scalar(predict_gfr(gfr, qs).value) - testing::oracle_ols(x, y, q)),
        std::abs(scalar(predict_nw(*data, qs, h, KernelKind::kEpanechnikov).value) -
                 k.dot(y) / k.sum()),
        std::abs(scalar(predict_lfr_kernel(*data, qs, h, KernelKind::kEpanechnikov).value) -
                 testing::oracle_local_linear(x, y, k, q)),
        std::abs(scalar(predict_rfwllfr(forest, qs).value) -
                 testing::oracle_local_linear(x, y, alpha, q)),
    };
    for (double e : errors) worst = std::max(worst, e);
  }
  return {worst <= 1e-8, "50 instances, max deviation " + fmt("%.2e", worst)};
}

// --- 2 ----------------------------------------------------------------------

Dataset random_dataset(std::mt19937_64& rng, const MetricSpace& space, int n, int p) {
  Dataset d;
  d.space = space;
  d.x.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.x(i, j) = testing::uniform(rng);
    d.y.push_back(testing::random_object(rng, space));
  }
  return d;
}

Outcome frf_coincidence() {
  double worst = 0;
  for (int f = 0; f < 20; ++f) {
    std::mt19937_64 rng(2000 + f);
    const MetricSpace space =
        f % 2 == 0 ? MetricSpace::wasserstein(21) : MetricSpace::log_cholesky(3);
    auto data = std::make_shared<const Dataset>(random_dataset(rng, space, 80, 2));
    ForestConfig config;
    config.num_trees = 25;
    config.tree.max_depth = 4;
    config.master_seed = f;
    const ForestModel forest = fit_forest(data, config);
    for (int t = 0; t < 5; ++t) {
      const Eigen::VectorXd q = uniform_point(rng, 2);
      const WeightVector alpha = kernel_weights(forest, row_span(q));
      const double a =
          frechet_objective(space, data->y, as_span(alpha), predict_rfwlcfr(forest, row_span(q)).value);
      const double b =
          frechet_objective(space, data->y, as_span(alpha), predict_frf(forest, row_span(q)).value);
      worst = std::max(worst, std::abs(a - b));
    }
  }

  // Witness on the sphere: curved responses spread over a wide cap.
  std::mt19937_64 rng(2100);
  Dataset d;
  d.space = MetricSpace::sphere();
  d.x.resize(60, 1);
  for (int i = 0; i < 60; ++i) {
    d.x(i, 0) = testing::uniform(rng);
    d.y.push_back(SphereObject{Eigen::VectorXd(
        testing::random_in_cap(rng, Eigen::Vector3d::UnitZ(), 1.3))});
  }
  auto data = std::make_shared<const Dataset>(d);
  ForestConfig config;
  config.num_trees = 20;
  config.tree.max_depth = 4;
  config.tree.min_leaf = 3;
  config.master_seed = 6;
  const ForestModel forest = fit_forest(data, config);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, 0.5);
  const double gap = distance(d.space, predict_rfwlcfr(forest, row_span(q)).value,
                              predict_frf(forest, row_span(q)).value);
  return {worst <= 1e-8 && gap > 0,
          "20 forests, max objective gap " + fmt("%.2e", worst) +
              "; sphere witness distance " + fmt("%.3e", gap)};
}

// --- 3-6 --------------------------------------------------------------------

MonteCarloResult bench(Scenario scenario, int p, int n, int runs,
                       const std::vector<EstimatorKind>& kinds, std::uint64_t seed) {
  SimSetting setting;
  setting.scenario = scenario;
  setting.p = p;
  setting.n = n;
  MonteCarloOptions options;
  options.runs = runs;
  options.test_size = 100;
  options.seed = seed;
  return monte_carlo(setting, kinds, options);
}

std::string describe(const MonteCarloResult& r) {
  std::string out;
  for (const MethodSummary& m : r.summary) {
    if (!out.empty()) out += ", ";
    out += std::string(to_string(m.kind)) + " " + fmt("%.4g", m.mean_mse) + " (" +
           fmt("%.2g", m.sd_mse) + ")";
    if (m.failures > 0) out += " [" + std::to_string(m.failures) + " failed]";
  }
  return out;
}

bool complete(const MonteCarloResult& r) {
  for (const MethodSummary& m : r.summary) {
    if (m.failures > 0) return false;
  }
  return true;
}

const std::vector<EstimatorKind> kThree{EstimatorKind::kGfr, EstimatorKind::kRfwlcfr,
                                        EstimatorKind::kRfwllfr};

Outcome nonlinear_distribution_ordering() {
  const MonteCarloResult r = bench(Scenario::kI2, 2, 100, 20, kThree, 31);
  const double gfr = r.summary[0].mean_mse, lc = r.summary[1].mean_mse,
               ll = r.summary[2].mean_mse;
  return {complete(r) && ll < lc && lc < gfr / 3, "I-2 p=2 n=100, 20 runs: " + describe(r)};
}

Outcome linear_distribution_ordering() {
  const MonteCarloResult r = bench(Scenario::kI1, 2, 100, 20, kThree, 41);
  return {complete(r) && r.summary[0].mean_mse < r.summary[1].mean_mse,
          "I-1 p=2 n=100, 20 runs: " + describe(r)};
}

Outcome sphere_ordering() {
  const MonteCarloResult r =
      bench(Scenario::kIII2, 2, 100, 20, {EstimatorKind::kRfwlcfr, EstimatorKind::kRfwllfr}, 51);
  return {complete(r) && r.summary[1].mean_mse < r.summary[0].mean_mse,
          "III-2 p=2 n=100, 20 runs: " + describe(r)};
}

Outcome spd_ordering() {
  const MonteCarloResult r = bench(Scenario::kII1, 5, 200, 10, kThree, 61);
  const double gfr = r.summary[0].mean_mse, lc = r.summary[1].mean_mse,
               ll = r.summary[2].mean_mse;
  return {complete(r) && ll < lc && lc < gfr,
          "II-1 p=5 n=200 Log-Cholesky, 10 runs: " + describe(r)};
}

// --- 7 ----------------------------------------------------------------------

// Affine-invariant distance between 2x2 SPD matrices through the eigenvalues
// of b^{-1} a, i.e. the roots of l^2 - tr(b^{-1} a) l + det(a) / det(b).
double affine_distance_2x2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b_inv,
                           double det_ratio) {
  const double tr = (b_inv * a).trace();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det_ratio));
  const double l1 = tr / 2 + disc, l2 = det_ratio / l1;
  return std::hypot(std::log(l1), std::log(l2));
}

Outcome frechet_mean_oracle() {
  std::mt19937_64 rng(7000);
  double worst = -INFINITY;
  int instances = 0;
  const auto lattice = testing::fibonacci_sphere(100000);
  const MetricSpace sphere = MetricSpace::sphere();
  for (int t = 0; t < 100; ++t) {
    const Eigen::Vector3d center = testing::random_unit(rng);
    std::vector<MetricObject> pts;
    std::vector<double> w;
    const int k = 3 + t % 5;
    for (int i = 0; i < k; ++i) {
      pts.push_back(SphereObject{Eigen::VectorXd(testing::random_in_cap(rng, center, 1.0))});
      w.push_back(testing::uniform(rng, 0.2, 1.0));
    }
    if (t % 2 == 1) w[0] = -0.15 * testing::uniform(rng, 0.5, 1.0);  // signed instance
    const MetricObject m = weighted_frechet_mean(sphere, pts, w).value;
    double best = INFINITY;
    for (const Eigen::Vector3d& g : lattice) {
      double obj = 0;
      for (int i = 0; i < k; ++i) {
        obj += w[i] * std::pow(testing::oracle_sphere(std::get<SphereObject>(pts[i]).coords, g), 2);
      }
      best = std::min(best, obj);
    }
    worst = std::max(worst, frechet_objective(sphere, pts, w, m) - best);
    ++instances;
  }

  const MetricSpace affine = MetricSpace::affine_invariant(2);
  const int side = 47;  // 47^3 = 103823 candidates
  for (int t = 0; t < 100; ++t) {
    const Eigen::MatrixXd base = testing::random_symmetric(rng, 2, 0.5);
    std::vector<MetricObject> pts;
    std::vector<Eigen::Matrix2d> mats;
    std::vector<double> w;
    const int k = 3 + t % 4;
    Eigen::Matrix2d log_center = Eigen::Matrix2d::Zero();
    for (int i = 0; i < k; ++i) {
      const Eigen::MatrixXd s = base + testing::random_symmetric(rng, 2, 0.35);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig((Eigen::Matrix2d(s)));
      const Eigen::Matrix2d spd = eig.eigenvectors() *
                                  eig.eigenvalues().array().exp().matrix().asDiagonal() *
                                  eig.eigenvectors().transpose();
      mats.push_back(spd);
      pts.push_back(SpdObject{Eigen::MatrixXd(spd)});
      w.push_back(testing::uniform(rng, 0.2, 1.0));
    }
    if (t % 2 == 1) w[0] = -0.15 * testing::uniform(rng, 0.5, 1.0);
    double total = 0;
    for (double v : w) total += v;
    for (int i = 0; i < k; ++i) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(mats[i]);
      log_center += w[i] / total * eig.eigenvectors() *
                    eig.eigenvalues().array().log().matrix().asDiagonal() *
                    eig.eigenvectors().transpose();
    }
    const MetricObject m = weighted_frechet_mean(affine, pts, w).value;

    // Brute force over exp of a box of symmetric matrices around the
    // log-Euclidean mean.
    const double half = 0.9, step = 2 * half / (side - 1);
    double best = INFINITY;
    for (int a = 0; a < side; ++a) {
      for (int b = 0; b < side; ++b) {
        for (int c = 0; c < side; ++c) {
          Eigen::Matrix2d s = log_center;
          s(0, 0) += -half + a * step;
          s(1, 1) += -half + c * step;
          s(0, 1) += -half + b * step;
          s(1, 0) = s(0, 1);
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(s);
          const Eigen::Vector2d ev = eig.eigenvalues();
          const Eigen::Matrix2d inv = eig.eigenvectors() *
                                      (-ev.array()).exp().matrix().asDiagonal() *
                                      eig.eigenvectors().transpose();
          const double det = std::exp(ev.sum());
          double obj = 0;
          for (int i = 0; i < k; ++i) {
            const double d = affine_distance_2x2(mats[i], inv, mats[i].determinant() / det);
            obj += w[i] * d * d;
          }
          best = std::min(best, obj);
        }
      }
    }
    worst = std::max(worst, frechet_objective(affine, pts, w, m) - best);
    ++instances;
  }
  return {worst <= 1e-3, std::to_string(instances) +
                             " instances (sphere + affine-invariant, half signed), worst "
                             "solver-minus-grid objective " + fmt("%.2e", worst)};
}

// --- 8 ----------------------------------------------------------------------

Outcome weight_identities() {
  double kernel_sum = 0, kernel_min = INFINITY, ll_sum = 0, ll_moment = 0;
  int queries = 0;
  for (int f = 0; f < 10; ++f) {
    std::mt19937_64 rng(8000 + f);
    const int p = 1 + f % 4;
    Eigen::MatrixXd x(150, p);
    Eigen::VectorXd y(150);
    for (int i = 0; i < 150; ++i) {
      for (int j = 0; j < p; ++j) x(i, j) = testing::uniform(rng);
      y[i] = std::cos(4 * x(i, 0)) + 0.3 * testing::gaussian(rng);
    }
    auto data = std::make_shared<const Dataset>(testing::scalar_dataset(x, y));
    ForestConfig config;
    config.num_trees = 50;
    config.tree.max_depth = 3 + f % 4;
    config.tree.mtry = 1 + f % p;
    config.tree.honest = f % 3 == 0;
    config.subsample_mode = f % 2 ? SubsampleMode::kWithoutReplacement : SubsampleMode::kBootstrap;
    config.subsample_size = 100;
    config.master_seed = f;
    const ForestModel forest = fit_forest(data, config);
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd q = uniform_point(rng, p, 0.0, 1.0);
      const WeightVector alpha = kernel_weights(forest, row_span(q));
      kernel_sum = std::max(kernel_sum, std::abs(alpha.sum() - 1));
      kernel_min = std::min(kernel_min, alpha.minCoeff());
      const WeightVector t_w = local_linear_weights(x, row_span(q), alpha).weights;
      ll_sum = std::max(ll_sum, std::abs(t_w.sum() - 1));
      ll_moment = std::max(ll_moment, ((x.rowwise() - q.transpose()).transpose() * t_w).norm());
      ++queries;
    }
  }
  return {kernel_sum <= 1e-12 && kernel_min >= 0 && ll_sum <= 1e-10 && ll_moment <= 1e-8,
          std::to_string(queries) + " queries: |sum alpha - 1| " + fmt("%.1e", kernel_sum) +
              ", min alpha " + fmt("%.1e", kernel_min) + ", |sum t - 1| " +
              fmt("%.1e", ll_sum) + ", |sum t (X - x)| " + fmt("%.1e", ll_moment)};
}

// --- 9 ----------------------------------------------------------------------

Outcome honesty_audit() {
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 rng(9000 + trial);
    Eigen::MatrixXd x(80, 2);
    Eigen::VectorXd y(80);
    for (int i = 0; i < 80; ++i) {
      x.row(i) << testing::uniform(rng), testing::uniform(rng);
      y[i] = x(i, 0) + 0.2 * testing::gaussian(rng);
    }
    ForestConfig config;
    config.num_trees = 1 + trial % 5;
    config.tree.honest = true;
    config.tree.min_leaf = 3;
    config.master_seed = trial;
    auto check = [&](const ForestModel& forest) {
      std::set<int> prediction;
      for (const FrechetTree& tree : forest.trees()) {
        prediction.insert(tree.prediction_indices().begin(), tree.prediction_indices().end());
      }
      for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd q = uniform_point(rng, 2, 0.0, 1.0);
        for (const FrechetTree& tree : forest.trees()) {
          const std::set<int> own(tree.prediction_indices().begin(),
                                  tree.prediction_indices().end());
          for (int i : tree.leaf_for(row_span(q))) violations += own.count(i) == 0;
        }
        const WeightVector alpha = kernel_weights(forest, row_span(q));
        for (int i = 0; i < 80; ++i) violations += alpha[i] > 0 && prediction.count(i) == 0;
      }
    };
    auto data = std::make_shared<const Dataset>(testing::scalar_dataset(x, y));
    const ForestModel before = fit_forest(data, config);
    check(before);
    // Structure-half responses of the first tree are replaced by wild values.
    for (int i : before.trees()[0].structure_indices()) y[i] = 1e3 * testing::gaussian(rng);
    auto mutated = std::make_shared<const Dataset>(testing::scalar_dataset(x, y));
    const ForestModel after = fit_forest(mutated, config);
    check(after);
    const std::set<int> structure(before.trees()[0].structure_indices().begin(),
                                  before.trees()[0].structure_indices().end());
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd q = uniform_point(rng, 2, 0.0, 1.0);
      for (int i : after.trees()[0].leaf_for(row_span(q))) violations += structure.count(i);
    }
  }
  return {violations == 0, "100 trials, " + std::to_string(violations) + " violations"};
}

// --- 10 ---------------------------------------------------------------------

Outcome geometry_roundtrips() {
  std::mt19937_64 rng(10000);
  double roundtrip = 0;
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + t % 3;
    const Eigen::MatrixXd s = testing::random_symmetric(rng, m);
    roundtrip = std::max(roundtrip, (matrix_log(matrix_exp(s)) - s).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd spd = testing::random_spd(rng, m);
    roundtrip = std::max(roundtrip, (matrix_exp(matrix_log(spd)) - spd).cwiseAbs().maxCoeff());
    const Eigen::VectorXd a = testing::random_unit(rng), b = testing::random_unit(rng);
    if (a.dot(b) > -0.999) {
      roundtrip = std::max(roundtrip, (sphere_exp(a, sphere_log(a, b)) - b).norm());
    }
    Eigen::VectorXd v = testing::random_vector(rng, 3);
    v -= v.dot(a) * a;
    v *= 2.5 * testing::uniform(rng) / v.norm();
    roundtrip = std::max(roundtrip, (sphere_log(a, sphere_exp(a, v)) - v).norm());
  }

  int axiom_failures = 0;
  for (const MetricSpace& space :
       {MetricSpace::wasserstein(21), MetricSpace::log_cholesky(3),
        MetricSpace::affine_invariant(3), MetricSpace::sphere()}) {
    for (int t = 0; t < 1000; ++t) {
      const MetricObject a = testing::random_object(rng, space);
      const MetricObject b = testing::random_object(rng, space);
      const MetricObject c = testing::random_object(rng, space);
      const double ab = distance(space, a, b), ba = distance(space, b, a);
      const double bc = distance(space, b, c), ac = distance(space, a, c);
      const bool ok = distance(space, a, a) <= 1e-12 && ab > 0 && std::abs(ab - ba) <= 1e-12 &&
                      ac <= ab + bc + 1e-12;
      axiom_failures += !ok;
    }
  }

  const double i4 = distance(MetricSpace::log_cholesky(2),
                             SpdObject{Eigen::MatrixXd::Identity(2, 2)},
                             SpdObject{4 * Eigen::MatrixXd::Identity(2, 2)});
  const double ie2 = distance(MetricSpace::affine_invariant(3),
                              SpdObject{Eigen::MatrixXd::Identity(3, 3)},
                              SpdObject{std::exp(2.0) * Eigen::MatrixXd::Identity(3, 3)});
  const double closed = std::max(std::abs(i4 - std::sqrt(2.0) * std::log(2.0)),
                                 std::abs(ie2 - 2 * std::sqrt(3.0)));
  return {roundtrip <= 1e-9 && axiom_failures == 0 && closed <= 1e-9,
          "round-trip error " + fmt("%.1e", roundtrip) + ", axiom failures " +
              std::to_string(axiom_failures) + "/4000, closed-form error " +
              fmt("%.1e", closed)};
}

// --- 11 ---------------------------------------------------------------------

Outcome scalar_local_linear_equivalence() {
  double worst = 0;
  for (int q_index = 0; q_index < 100; ++q_index) {
    std::mt19937_64 rng(11000 + q_index);
    const MetricSpace space =
        q_index % 2 == 0 ? MetricSpace::wasserstein(21) : MetricSpace::log_cholesky(2);
    auto data = std::make_shared<const Dataset>(random_dataset(rng, space, 70, 1));
    ForestConfig config;
    config.num_trees = 20;
    config.tree.max_depth = 3;
    config.master_seed = q_index;
    const ForestModel forest = fit_forest(data, config);
    const double q = testing::uniform(rng, 0.1, 0.9);
    const Eigen::VectorXd qv = Eigen::VectorXd::Constant(1, q);
    const WeightVector alpha = kernel_weights(forest, row_span(qv));
    const Eigen::VectorXd t =
        testing::oracle_scalar_local_linear_weights(data->x.col(0), q, alpha);
    const MetricObject closed = weighted_frechet_mean(space, data->y, as_span(t)).value;
    worst = std::max(worst, distance(space, predict_rfwllfr(forest, row_span(qv)).value, closed));
  }
  return {worst <= 1e-10, "100 queries, max distance " + fmt("%.2e", worst)};
}

// --- 12 ---------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome bench_determinism() {
  const fs::path root = fs::temp_directory_path() / "frechet_acceptance_bench";
  fs::remove_all(root);
  auto invoke = [&](const std::string& name, const std::string& threads) {
    std::vector<std::string> args{"frechet",   "bench-table", "--seed",   "12",
                                  "--scenario", "I-2",         "--n",      "100",
                                  "--runs",     "3",           "--methods", "gfr,rfwlcfr,rfwllfr,frf",
                                  "--threads",  threads,       "-o",       (root / name).string()};
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    std::ostringstream sink;
    std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
    const int status = run_main(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(saved);
    std::string bytes;
    for (const char* file : {"summary.csv", "results_long.csv", "metrics.json"}) {
      bytes += slurp(root / name / file);
    }
    return status == 0 ? bytes : std::string();
  };
  const std::string a = invoke("a", "1");
  const std::string b = invoke("b", "1");
  const std::string c = invoke("c", "8");
  fs::remove_all(root);
  const bool ok = !a.empty() && a == b && a == c;
  return {ok, std::to_string(a.size()) + " bytes; repeat " + (a == b ? "identical" : "DIFFERS") +
                  ", threads 1 vs 8 " + (a == c ? "identical" : "DIFFERS")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace frechet

int main() {
  using namespace frechet;
  const std::vector<Criterion> criteria{
      {1, "Euclidean degeneration", 60, euclidean_degeneration},
      {2, "FRF/RFWLCFR coincidence", 120, frf_coincidence},
      {3, "I-2 ordering RFWLLFR < RFWLCFR < GFR/3", 600, nonlinear_distribution_ordering},
      {4, "I-1 ordering GFR < RFWLCFR", 300, linear_distribution_ordering},
      {5, "III-2 ordering RFWLLFR < RFWLCFR", 600, sphere_ordering},
      {6, "II-1 ordering RFWLLFR < RFWLCFR < GFR", 900, spd_ordering},
      {7, "Frechet-mean brute-force oracle", 300, frechet_mean_oracle},
      {8, "Weight identities", 600, weight_identities},
      {9, "Honesty audit", 600, honesty_audit},
      {10, "Geometry round trips", 600, geometry_roundtrips},
      {11, "Scalar local-linear equivalence", 600, scalar_local_linear_equivalence},
      {12, "bench-table determinism", 600, bench_determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = outcome.pass && seconds < c.budget_seconds;
    failures += !pass;
    std::printf("%s [%2d] %s: %s (%.1f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
