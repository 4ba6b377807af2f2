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

#ifndef FRECHET_MODEL_IO_HPP_
#define FRECHET_MODEL_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "frechet/regressors.hpp"

namespace frechet {

// Where a persisted model finds its training data.
struct DataSource {
  bool inline_data = true;
  std::string x_path;
  std::string y_path;
  bool header = false;
};

nlohmann::json space_to_json(const MetricSpace& space);
MetricSpace space_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const EstimatorSpec& spec);
// Missing fields keep the values of `defaults`.
EstimatorSpec spec_from_json(const nlohmann::json& j,
                             const EstimatorSpec& defaults = {});

nlohmann::json tree_to_json(const FrechetTree& tree);
FrechetTree tree_from_json(const nlohmann::json& j, const TreeConfig& config);

// Self-describing document: estimator, space, trees (forest kinds) and the
// training data, inline or by reference.
nlohmann::json model_to_json(const RegressionModel& model, const DataSource& source);
RegressionModel model_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});

}  // namespace frechet

#endif  // FRECHET_MODEL_IO_HPP_
