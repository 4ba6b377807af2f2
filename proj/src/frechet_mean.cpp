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

#include <algorithm>
#include <cmath>
#include <vector>

namespace frechet {
namespace {

// Points with nonzero weight, gathered once per solve.
struct WeightedSet {
  std::vector<const MetricObject*> points;
  std::vector<double> weights;
  double total = 0.0;
};

WeightedSet gather(std::span<const MetricObject> points,
                   std::span<const int> subset, std::span<const double> weights) {
  const bool identity = subset.empty();
  const std::size_t count = identity ? points.size() : subset.size();
  if (weights.size() != count) {
    throw DomainError("weight vector length does not match the points");
  }
  WeightedSet set;
  for (std::size_t k = 0; k < count; ++k) {
    if (weights[k] == 0.0) continue;
    const std::size_t idx = identity ? k : static_cast<std::size_t>(subset[k]);
    if (idx >= points.size()) throw DomainError("subset index out of range");
    set.points.push_back(&points[idx]);
    set.weights.push_back(weights[k]);
    set.total += weights[k];
  }
  if (set.points.empty()) throw DomainError("all weights are zero");
  if (!(set.total > 0.0)) throw DomainError("total weight is not positive");
  return set;
}

MeanResult quantile_mean(const MetricSpace& space, const WeightedSet& set) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(space.dimension);
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const auto& q = std::get<QuantileObject>(*set.points[i]).values;
    if (q.size() != space.dimension) {
      throw DomainError("quantile grid size mismatch");
    }
    acc += (set.weights[i] / set.total) * q;
  }
  return {QuantileObject{isotonic_project(acc)}, true, 0};
}

MeanResult log_cholesky_mean(const MetricSpace& space, const WeightedSet& set) {
  const MetricSpace embedded = MetricSpace::log_cholesky(space.dimension);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(embedding_dimension(embedded));
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    acc += (set.weights[i] / set.total) * embed(embedded, *set.points[i]);
  }
  return {unembed(embedded, acc), true, 0};
}

// Descent driver shared by the sphere and affine-invariant solvers.
// `evaluate` fills the objective and the weight-normalized Riemannian
// descent direction at a point; `retract` moves along a direction.
template <typename Point>
struct DescentResult {
  Point point;
  bool converged = false;
  int iterations = 0;
};

template <typename Point, typename Evaluate, typename Retract>
DescentResult<Point> riemannian_descent(Point start, const WeightedSet& set,
                              const SolverOptions& options, Evaluate evaluate,
                              Retract retract) {
  Point current = std::move(start);
  Point direction;
  double objective = evaluate(current, &direction);
  double step = 1.0;
  int iteration = 0;
  bool converged = false;
  while (iteration < options.max_iterations) {
    ++iteration;
    if (direction.squaredNorm() < 1e-28) {
      converged = true;
      break;
    }
    Point candidate = retract(current, step * direction);
    Point candidate_direction;
    const double candidate_objective = evaluate(candidate, &candidate_direction);
    if (candidate_objective <= objective) {
      const double improvement = (objective - candidate_objective) / set.total;
      current = std::move(candidate);
      direction = std::move(candidate_direction);
      objective = candidate_objective;
      if (improvement < options.tolerance) {
        converged = true;
        break;
      }
    } else {
      step *= 0.5;
      if (step < 1e-12) {
        converged = true;
        break;
      }
    }
  }
  return {std::move(current), converged, iteration};
}

MeanResult sphere_mean(const MetricSpace& space, const WeightedSet& set,
                       const SolverOptions& options) {
  const int q = space.dimension;
  std::vector<const Eigen::VectorXd*> coords;
  coords.reserve(set.points.size());
  for (const MetricObject* p : set.points) {
    const auto& c = std::get<SphereObject>(*p).coords;
    if (c.size() != q) throw DomainError("sphere dimension mismatch");
    coords.push_back(&c);
  }

  Eigen::VectorXd start = Eigen::VectorXd::Zero(q);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    start += (set.weights[i] / set.total) * *coords[i];
  }
  if (start.norm() < 1e-6) {
    const auto heaviest =
        std::max_element(set.weights.begin(), set.weights.end()) -
        set.weights.begin();
    start = *coords[heaviest];
  }
  start.normalize();

  auto evaluate = [&](const Eigen::VectorXd& y, Eigen::VectorXd* direction) {
    direction->setZero(q);
    double objective = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const Eigen::VectorXd& p = *coords[i];
      const double c = std::clamp(y.dot(p), -1.0, 1.0);
      Eigen::VectorXd v = p - c * y;
      const double s = v.norm();
      const double theta = std::atan2(s, c);
      objective += set.weights[i] * theta * theta;
      // Log_y(p); contributes nothing at the cut locus.
      if (s > 1e-15) *direction += (set.weights[i] / set.total) * (theta / s) * v;
    }
    return objective;
  };
  auto retract = [](const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = y + v;
    return Eigen::VectorXd(out / out.norm());
  };

  auto result = riemannian_descent(start, set, options, evaluate, retract);
  return {SphereObject{std::move(result.point)}, result.converged,
          result.iterations};
}

MeanResult affine_invariant_mean(const MetricSpace& space,
                                 const WeightedSet& set,
                                 const SolverOptions& options) {
  const int m = space.dimension;
  std::vector<const Eigen::MatrixXd*> mats;
  mats.reserve(set.points.size());
  for (const MetricObject* p : set.points) {
    const auto& y = std::get<SpdObject>(*p).matrix;
    if (y.rows() != m || y.cols() != m) {
      throw DomainError("matrix order mismatch");
    }
    mats.push_back(&y);
  }
  const Eigen::MatrixXd start =
      std::get<SpdObject>(log_cholesky_mean(space, set).value).matrix;

  auto evaluate = [&](const Eigen::MatrixXd& y, Eigen::MatrixXd* direction) {
    const Eigen::MatrixXd y_inv_sqrt = matrix_inv_sqrt(y);
    direction->setZero(m, m);
    double objective = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i) {
      Eigen::MatrixXd inner = y_inv_sqrt * *mats[i] * y_inv_sqrt;
      const Eigen::MatrixXd log_inner = matrix_log(0.5 * (inner + inner.transpose()));
      objective += set.weights[i] * log_inner.squaredNorm();
      *direction += (set.weights[i] / set.total) * log_inner;
    }
    return objective;
  };
  // Directions live in the tangent space whitened at y.
  auto retract = [](const Eigen::MatrixXd& y, const Eigen::MatrixXd& v) {
    const Eigen::MatrixXd root = matrix_sqrt(y);
    Eigen::MatrixXd out = root * matrix_exp(0.5 * (v + v.transpose())) * root;
    return Eigen::MatrixXd(0.5 * (out + out.transpose()));
  };
  auto result = riemannian_descent(start, set, options, evaluate, retract);
  return {SpdObject{std::move(result.point)}, result.converged,
          result.iterations};
}

}  // namespace

double frechet_objective(const MetricSpace& space,
                         std::span<const MetricObject> points,
                         std::span<const double> weights, const MetricObject& y) {
  if (points.size() != weights.size()) {
    throw DomainError("weight vector length does not match the points");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] == 0.0) continue;
    total += weights[i] * squared_distance(space, points[i], y);
  }
  return total;
}

MeanResult weighted_frechet_mean(const MetricSpace& space,
                                 std::span<const MetricObject> points,
                                 std::span<const int> subset,
                                 std::span<const double> weights,
                                 const SolverOptions& options) {
  const WeightedSet set = gather(points, subset, weights);
  switch (space.kind) {
    case SpaceKind::kWasserstein1D:
      return quantile_mean(space, set);
    case SpaceKind::kSpdLogCholesky:
      return log_cholesky_mean(space, set);
    case SpaceKind::kSpdAffineInvariant:
      return affine_invariant_mean(space, set, options);
    case SpaceKind::kSphereGeodesic:
      return sphere_mean(space, set, options);
  }
  throw DomainError("unsupported metric space");
}

MeanResult weighted_frechet_mean(const MetricSpace& space,
                                 std::span<const MetricObject> points,
                                 std::span<const double> weights,
                                 const SolverOptions& options) {
  return weighted_frechet_mean(space, points, {}, weights, options);
}

MeanResult frechet_mean(const MetricSpace& space,
                        std::span<const MetricObject> points,
                        std::span<const int> subset,
                        const SolverOptions& options) {
  const std::vector<double> ones(subset.size(), 1.0);
  return weighted_frechet_mean(space, points, subset, ones, options);
}

}  // namespace frechet
