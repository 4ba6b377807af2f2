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

#include "frechet/forest.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "frechet/parallel.hpp"
#include "frechet/response_cache.hpp"
#include "frechet/seed.hpp"

namespace frechet {
namespace {

void check_forest_config(const ForestConfig& config, int n) {
  if (config.num_trees < 1) throw DomainError("num_trees must be at least 1");
  if (config.tree.min_leaf < 1) throw DomainError("min_leaf must be at least 1");
  if (n < 2 * config.tree.min_leaf) {
    throw DomainError("need at least 2 * min_leaf = " +
                      std::to_string(2 * config.tree.min_leaf) +
                      " training samples, got " + std::to_string(n));
  }
  if (config.subsample_mode == SubsampleMode::kWithoutReplacement &&
      (config.subsample_size < 0 || config.subsample_size > n)) {
    throw DomainError("subsample_size must lie in [1, n]");
  }
}

}  // namespace

std::string_view to_string(SubsampleMode mode) {
  return mode == SubsampleMode::kBootstrap ? "bootstrap" : "without_replacement";
}

SubsampleMode parse_subsample_mode(std::string_view name) {
  if (name == "bootstrap") return SubsampleMode::kBootstrap;
  if (name == "without_replacement") return SubsampleMode::kWithoutReplacement;
  throw DomainError("unknown subsample mode: " + std::string(name));
}

std::uint64_t tree_seed(std::uint64_t master_seed, std::uint64_t index) {
  return derive_seed(master_seed, index);
}

ForestModel::ForestModel(std::shared_ptr<const Dataset> data, ForestConfig config,
                         std::vector<FrechetTree> trees)
    : data_(std::move(data)), config_(config), trees_(std::move(trees)) {
  if (!data_) throw DomainError("forest has no training data");
  if (trees_.empty()) throw DomainError("forest has no trees");
  for (const FrechetTree& tree : trees_) {
    for (int i : tree.subsample()) {
      if (i < 0 || i >= data_->size()) {
        throw DomainError("tree subsample index out of range");
      }
    }
    for (const TreeNode& node : tree.nodes()) {
      for (int i : node.samples) {
        if (i < 0 || i >= data_->size()) {
          throw DomainError("leaf sample index out of range");
        }
      }
    }
  }
}

std::vector<int> draw_subsample(int n, const ForestConfig& config,
                                std::mt19937_64& rng) {
  std::vector<int> out;
  if (config.subsample_mode == SubsampleMode::kBootstrap) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    out.resize(n);
    for (int& i : out) i = pick(rng);
  } else {
    const int s = config.subsample_size == 0 ? n : config.subsample_size;
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
    for (int k = 0; k < s; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(out[k], out[pick(rng)]);
    }
    out.resize(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ForestModel fit_forest(std::shared_ptr<const Dataset> data,
                       const ForestConfig& config) {
  check_dataset(*data);
  check_forest_config(config, data->size());
  const ResponseCache cache(data->space, data->y);
  std::vector<std::optional<FrechetTree>> grown(config.num_trees);
  parallel_for(config.num_trees, config.threads, [&](int b) {
    std::mt19937_64 rng(tree_seed(config.master_seed, static_cast<std::uint64_t>(b)));
    const std::vector<int> subsample = draw_subsample(data->size(), config, rng);
    TreeConfig tree_config = config.tree;
    tree_config.seed = rng();
    grown[b] = grow_tree(data->x, cache, subsample, tree_config);
  });
  std::vector<FrechetTree> trees;
  trees.reserve(grown.size());
  for (auto& tree : grown) trees.push_back(std::move(*tree));
  return ForestModel(std::move(data), config, std::move(trees));
}

ForestModel fit_forest(const Dataset& data, const ForestConfig& config) {
  return fit_forest(std::make_shared<const Dataset>(data), config);
}

WeightVector kernel_weights(const ForestModel& model, std::span<const double> x) {
  WeightVector alpha = WeightVector::Zero(model.data().size());
  const double per_tree = 1.0 / static_cast<double>(model.num_trees());
  for (const FrechetTree& tree : model.trees()) {
    const std::vector<int>& leaf = tree.leaf_for(x);
    const double w = per_tree / static_cast<double>(leaf.size());
    for (int i : leaf) alpha[i] += w;
  }
  return alpha;
}

}  // namespace frechet
