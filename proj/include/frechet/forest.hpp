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

#ifndef FRECHET_FOREST_HPP_
#define FRECHET_FOREST_HPP_

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "frechet/dataset.hpp"
#include "frechet/frechet_mean.hpp"
#include "frechet/tree.hpp"

namespace frechet {

enum class SubsampleMode {
  // n draws with replacement; repeated draws occupy a leaf once per draw.
  kBootstrap,
  // subsample_size distinct indices.
  kWithoutReplacement,
};

std::string_view to_string(SubsampleMode mode);
SubsampleMode parse_subsample_mode(std::string_view name);

struct ForestConfig {
  int num_trees = 100;
  TreeConfig tree;
  SubsampleMode subsample_mode = SubsampleMode::kBootstrap;
  // Without replacement only; 0 means n.
  int subsample_size = 0;
  std::uint64_t master_seed = 0;
  // Worker threads for growing trees; 0 means all cores. Never affects
  // the fitted model.
  int threads = 1;
};

// Seed of tree `index`, a function of (master_seed, index) alone.
std::uint64_t tree_seed(std::uint64_t master_seed, std::uint64_t index);

class ForestModel {
 public:
  ForestModel(std::shared_ptr<const Dataset> data, ForestConfig config,
              std::vector<FrechetTree> trees);

  const Dataset& data() const { return *data_; }
  std::shared_ptr<const Dataset> shared_data() const { return data_; }
  const MetricSpace& space() const { return data_->space; }
  const ForestConfig& config() const { return config_; }
  const std::vector<FrechetTree>& trees() const { return trees_; }
  int num_trees() const { return static_cast<int>(trees_.size()); }

 private:
  std::shared_ptr<const Dataset> data_;
  ForestConfig config_;
  std::vector<FrechetTree> trees_;
};

// Subsample drawn for one tree from its seed stream.
std::vector<int> draw_subsample(int n, const ForestConfig& config,
                                std::mt19937_64& rng);

ForestModel fit_forest(std::shared_ptr<const Dataset> data,
                       const ForestConfig& config);
ForestModel fit_forest(const Dataset& data, const ForestConfig& config);

// alpha_i(x) = (1/B) sum_b #{occurrences of i in L_b(x)} / |L_b(x)|.
WeightVector kernel_weights(const ForestModel& model, std::span<const double> x);

}  // namespace frechet

#endif  // FRECHET_FOREST_HPP_
