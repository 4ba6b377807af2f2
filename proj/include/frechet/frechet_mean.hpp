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

#ifndef FRECHET_FRECHET_MEAN_HPP_
#define FRECHET_FRECHET_MEAN_HPP_

#include <span>

#include <Eigen/Dense>

#include "frechet/metric_space.hpp"

namespace frechet {

using WeightVector = Eigen::VectorXd;

struct SolverOptions {
  int max_iterations = 200;
  // Stop once the (weight-normalized) objective improves by less than this.
  double tolerance = 1e-10;
};

struct MeanResult {
  MetricObject value;
  bool converged = true;
  int iterations = 0;
};

// sum_i w_i d^2(points[i], y).
double frechet_objective(const MetricSpace& space,
                         std::span<const MetricObject> points,
                         std::span<const double> weights, const MetricObject& y);

// argmin_y sum_i w_i d^2(points[i], y). Weights may be negative provided their
// sum is positive. Closed form in the embedded spaces, Riemannian gradient
// descent on the sphere and under the affine-invariant metric. When the
// iterative solvers hit max_iterations the best iterate is returned with
// converged == false.
MeanResult weighted_frechet_mean(const MetricSpace& space,
                                 std::span<const MetricObject> points,
                                 std::span<const double> weights,
                                 const SolverOptions& options = {});

// Same as above restricted to points[subset[k]] with weight weights[k].
// Repeated entries in `subset` count separately.
MeanResult weighted_frechet_mean(const MetricSpace& space,
                                 std::span<const MetricObject> points,
                                 std::span<const int> subset,
                                 std::span<const double> weights,
                                 const SolverOptions& options = {});

// Unweighted mean of points[subset[k]].
MeanResult frechet_mean(const MetricSpace& space,
                        std::span<const MetricObject> points,
                        std::span<const int> subset,
                        const SolverOptions& options = {});

inline std::span<const double> as_span(const WeightVector& w) {
  return {w.data(), static_cast<std::size_t>(w.size())};
}

}  // namespace frechet

#endif  // FRECHET_FRECHET_MEAN_HPP_
