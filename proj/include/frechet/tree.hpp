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

#ifndef FRECHET_TREE_HPP_
#define FRECHET_TREE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "frechet/frechet_mean.hpp"
#include "frechet/metric_space.hpp"
#include "frechet/response_cache.hpp"

namespace frechet {

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

enum class SplitMethod {
  // Every midpoint between consecutive distinct values of a feature.
  kExhaustive,
  // One candidate per feature: the two 1-D k-means centers of the node.
  kTwoMeans,
};

std::string_view to_string(SplitMethod method);
SplitMethod parse_split_method(std::string_view name);

struct TreeConfig {
  // A tree of depth 1 is a single leaf.
  int max_depth = kUnlimitedDepth;
  // Minimum number of (prediction) samples per child.
  int min_leaf = 5;
  // Features drawn per node; 0 means all of them.
  int mtry = 0;
  SplitMethod split_method = SplitMethod::kTwoMeans;
  bool honest = false;
  std::uint64_t seed = 0;
};

enum class RuleKind { kThreshold, kRepresentatives };

struct SplitRule {
  int feature = 0;
  RuleKind kind = RuleKind::kThreshold;
  // kThreshold: x[feature] < threshold goes left.
  double threshold = 0.0;
  // kRepresentatives: |x - left_center| <= |x - right_center| goes left.
  double left_center = 0.0;
  double right_center = 0.0;

  bool goes_left(double value) const {
    if (kind == RuleKind::kThreshold) return value < threshold;
    return std::abs(value - left_center) <= std::abs(value - right_center);
  }

  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

struct TreeNode {
  std::optional<SplitRule> rule;  // absent for leaves
  int left = -1;
  int right = -1;
  int depth = 1;
  // Leaves only: training indices whose responses enter predictions,
  // repeated once per occurrence in the subsample.
  std::vector<int> samples;

  bool is_leaf() const { return !rule.has_value(); }
};

class FrechetTree {
 public:
  FrechetTree(std::vector<TreeNode> nodes, TreeConfig config,
              std::vector<int> subsample, std::vector<int> structure,
              std::vector<int> prediction);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeConfig& config() const { return config_; }
  // Training indices drawn for this tree (with multiplicity).
  const std::vector<int>& subsample() const { return subsample_; }
  // Honest trees only: the two disjoint halves of the subsample.
  const std::vector<int>& structure_indices() const { return structure_; }
  const std::vector<int>& prediction_indices() const { return prediction_; }

  int leaf_index(std::span<const double> x) const;
  const std::vector<int>& leaf_for(std::span<const double> x) const {
    return nodes_[leaf_index(x)].samples;
  }
  std::vector<int> leaf_indices() const;

 private:
  std::vector<TreeNode> nodes_;
  TreeConfig config_;
  std::vector<int> subsample_;
  std::vector<int> structure_;
  std::vector<int> prediction_;
};

// (1/N(A)) [SSE(A) - SSE(A_l) - SSE(A_r)] for the threshold split
// x[feature] < threshold. Throws DomainError if a child is empty.
double split_gain_exhaustive(const Eigen::MatrixXd& x, const ResponseCache& y,
                             std::span<const int> samples, int feature,
                             double threshold);

// Two centers of the 1-D k-means problem on `values` (left < right).
// Empty when all values coincide.
std::optional<std::pair<double, double>> two_means_1d(std::span<const double> values);

struct TwoMeansSplit {
  double left_center = 0.0;
  double right_center = 0.0;
  double gain = 0.0;
};

// 2-means split of the node along `feature` and its variance reduction.
// Throws DomainError if the node has a single distinct value there.
TwoMeansSplit split_two_means(const Eigen::MatrixXd& x, const ResponseCache& y,
                              std::span<const int> samples, int feature);

// Best rule over `candidate_features`, subject to both children holding at
// least config.min_leaf samples. Ties go to the lowest feature, then the
// lowest cut point. Empty when no split reduces the Fréchet variance.
std::optional<SplitRule> best_split(const Eigen::MatrixXd& x,
                                    const ResponseCache& y,
                                    std::span<const int> samples,
                                    std::span<const int> candidate_features,
                                    const TreeConfig& config);

// Grows one tree on `subsample` (training indices, repeats allowed).
FrechetTree grow_tree(const Eigen::MatrixXd& x, const ResponseCache& y,
                      std::span<const int> subsample, const TreeConfig& config);

// Equal-weight Fréchet mean of the responses in the leaf containing `x`.
MeanResult tree_predict(const FrechetTree& tree, std::span<const double> x,
                        const MetricSpace& space,
                        std::span<const MetricObject> responses,
                        const SolverOptions& options = {});

inline std::span<const double> row_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace frechet

#endif  // FRECHET_TREE_HPP_
