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

#include "frechet/dataset.hpp"

#include <string>

namespace frechet {

Dataset subset_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.space = data.space;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), data.x.cols());
  out.y.reserve(rows.size());
  const bool has_truth = !data.truth.empty();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.x.row(static_cast<Eigen::Index>(k)) = data.x.row(rows[k]);
    out.y.push_back(data.y[rows[k]]);
    if (has_truth) out.truth.push_back(data.truth[rows[k]]);
  }
  return out;
}

void check_dataset(const Dataset& data) {
  if (static_cast<std::size_t>(data.x.rows()) != data.y.size()) {
    throw DomainError("predictor and response counts differ");
  }
  if (!data.truth.empty() && data.truth.size() != data.y.size()) {
    throw DomainError("truth and response counts differ");
  }
  if (!data.x.allFinite()) throw DomainError("predictor value is not finite");
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    try {
      validate(data.space, data.y[i]);
    } catch (const DomainError& e) {
      throw DomainError("response " + std::to_string(i) + ": " + e.what());
    }
  }
}

}  // namespace frechet
