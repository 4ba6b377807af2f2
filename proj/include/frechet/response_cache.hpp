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

#ifndef FRECHET_RESPONSE_CACHE_HPP_
#define FRECHET_RESPONSE_CACHE_HPP_

#include <span>

#include <Eigen/Dense>

#include "frechet/frechet_mean.hpp"
#include "frechet/metric_space.hpp"

namespace frechet {

// Per-sample response data prepared once for impurity evaluation. In the
// embedded spaces (Wasserstein, Log-Cholesky) every Fréchet variance reduces
// to a Euclidean sum of squares over the embedding rows; elsewhere the
// subset means are solved for directly.
//
// Holds a view of `responses`; the caller keeps them alive.
class ResponseCache {
 public:
  ResponseCache(const MetricSpace& space, std::span<const MetricObject> responses,
                const SolverOptions& options = {});

  const MetricSpace& space() const { return space_; }
  std::span<const MetricObject> responses() const { return responses_; }
  const SolverOptions& options() const { return options_; }

  bool embedded() const { return embedded_; }
  // n x k embedding coordinates; empty unless embedded().
  const Eigen::MatrixXd& embedding() const { return embedding_; }

  // sum_{i in subset} d^2(Y_i, Fréchet mean of the subset).
  double sum_of_squares(std::span<const int> subset) const;

  // Typical squared size of a response; sets the scale below which a
  // variance reduction is treated as rounding noise.
  double magnitude() const { return magnitude_; }

 private:
  MetricSpace space_;
  std::span<const MetricObject> responses_;
  SolverOptions options_;
  bool embedded_ = false;
  Eigen::MatrixXd embedding_;
  double magnitude_ = 1.0;
};

}  // namespace frechet

#endif  // FRECHET_RESPONSE_CACHE_HPP_
