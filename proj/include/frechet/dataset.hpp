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

#ifndef FRECHET_DATASET_HPP_
#define FRECHET_DATASET_HPP_

#include <vector>

#include <Eigen/Dense>

#include "frechet/metric_space.hpp"

namespace frechet {

// Training sample: n predictor rows paired with n metric-space responses.
// `truth` holds the regression target at each row when it is known
// (synthetic data) and is empty otherwise.
struct Dataset {
  MetricSpace space;
  Eigen::MatrixXd x;
  std::vector<MetricObject> y;
  std::vector<MetricObject> truth;

  int size() const { return static_cast<int>(x.rows()); }
  int num_features() const { return static_cast<int>(x.cols()); }
};

// Rows `rows` of `data`, in order. Truth is carried along when present.
Dataset subset_rows(const Dataset& data, const std::vector<int>& rows);

// Throws DomainError unless x, y (and truth, if present) agree in length and
// every object satisfies the invariants of the space.
void check_dataset(const Dataset& data);

}  // namespace frechet

#endif  // FRECHET_DATASET_HPP_
