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

#include "frechet/response_cache.hpp"

namespace frechet {

ResponseCache::ResponseCache(const MetricSpace& space,
                             std::span<const MetricObject> responses,
                             const SolverOptions& options)
    : space_(space),
      responses_(responses),
      options_(options),
      embedded_(space.has_euclidean_embedding()) {
  const auto n = static_cast<Eigen::Index>(responses.size());
  double total = 0.0;
  if (embedded_) {
    embedding_.resize(n, embedding_dimension(space));
    for (Eigen::Index i = 0; i < n; ++i) {
      embedding_.row(i) = embed(space, responses[i]).transpose();
    }
    total = embedding_.squaredNorm();
  } else if (space.kind == SpaceKind::kSpdAffineInvariant) {
    for (const MetricObject& y : responses) {
      total += matrix_log(std::get<SpdObject>(y).matrix).squaredNorm();
    }
  }
  magnitude_ = 1.0 + (n > 0 ? total / static_cast<double>(n) : 0.0);
}

double ResponseCache::sum_of_squares(std::span<const int> subset) const {
  if (subset.empty()) return 0.0;
  if (embedded_) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(embedding_.cols());
    for (int i : subset) mean += embedding_.row(i);
    mean /= static_cast<double>(subset.size());
    double ss = 0.0;
    for (int i : subset) ss += (embedding_.row(i) - mean).squaredNorm();
    return ss;
  }
  const MetricObject center =
      frechet_mean(space_, responses_, subset, options_).value;
  double ss = 0.0;
  for (int i : subset) ss += squared_distance(space_, responses_[i], center);
  return ss;
}

}  // namespace frechet
