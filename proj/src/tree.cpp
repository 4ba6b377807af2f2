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

#include "frechet/tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <string>

namespace frechet {
namespace {

constexpr double kMinRelativeGain = 1e-12;
constexpr double kTieTolerance = 1e-12;
constexpr std::size_t kExactTwoMeansLimit = 64;
constexpr int kLloydIterations = 50;

// Samples of one node. Without honesty both views are the same list.
struct NodeSamples {
  std::span<const int> structure;
  std::span<const int> prediction;
  bool honest = false;
};

struct Candidate {
  SplitRule rule;
  double gain = -std::numeric_limits<double>::infinity();
};

bool improves(double gain, double best) {
  if (std::isinf(best)) return gain > best;
  return gain > best + kTieTolerance * std::abs(best);
}

// Variance reduction of a partition of the structure samples, already
// divided by the node size.
class GainEvaluator {
 public:
  GainEvaluator(const ResponseCache& y, std::span<const int> structure)
      : y_(y), node_size_(static_cast<double>(structure.size())) {
    if (!y_.embedded()) parent_ss_ = y_.sum_of_squares(structure);
  }

  double operator()(std::span<const int> left, std::span<const int> right) const {
    if (y_.embedded()) {
      const Eigen::MatrixXd& e = y_.embedding();
      Eigen::RowVectorXd sum_left = Eigen::RowVectorXd::Zero(e.cols());
      Eigen::RowVectorXd sum_right = Eigen::RowVectorXd::Zero(e.cols());
      for (int i : left) sum_left += e.row(i);
      for (int i : right) sum_right += e.row(i);
      return from_sums(sum_left, static_cast<double>(left.size()), sum_right,
                       static_cast<double>(right.size()));
    }
    return (parent_ss_ - y_.sum_of_squares(left) - y_.sum_of_squares(right)) /
           node_size_;
  }

  // SSE(A) - SSE(A_l) - SSE(A_r) = n_l n_r / n |mean_l - mean_r|^2.
  double from_sums(const Eigen::RowVectorXd& sum_left, double n_left,
                   const Eigen::RowVectorXd& sum_right, double n_right) const {
    const double between =
        (sum_left / n_left - sum_right / n_right).squaredNorm();
    return n_left * n_right / node_size_ * between / node_size_;
  }

 private:
  const ResponseCache& y_;
  double node_size_;
  double parent_ss_ = 0.0;
};

std::vector<double> feature_values(const Eigen::MatrixXd& x,
                                   std::span<const int> samples, int feature) {
  std::vector<double> values;
  values.reserve(samples.size());
  for (int i : samples) values.push_back(x(i, feature));
  return values;
}

std::vector<double> union_values(const Eigen::MatrixXd& x,
                                 const NodeSamples& node, int feature) {
  std::vector<double> values = feature_values(x, node.structure, feature);
  if (node.honest) {
    for (int i : node.prediction) values.push_back(x(i, feature));
  }
  return values;
}

void partition(const Eigen::MatrixXd& x, std::span<const int> samples,
               const SplitRule& rule, std::vector<int>* left,
               std::vector<int>* right) {
  left->clear();
  right->clear();
  for (int i : samples) {
    (rule.goes_left(x(i, rule.feature)) ? left : right)->push_back(i);
  }
}

// Midpoint strictly above `lo` and not above `hi`.
double cut_between(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid > lo ? mid : hi;
}

Candidate exhaustive_candidate(const Eigen::MatrixXd& x, const ResponseCache& y,
                               const NodeSamples& node, int feature,
                               int min_leaf, const GainEvaluator& gain) {
  Candidate best;
  std::vector<double> cuts = union_values(x, node, feature);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.size() < 2) return best;

  std::vector<int> order(node.structure.begin(), node.structure.end());
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return x(a, feature) < x(b, feature);
  });
  std::vector<double> pred_values = feature_values(x, node.prediction, feature);
  std::sort(pred_values.begin(), pred_values.end());

  const std::size_t n_struct = order.size();
  const std::size_t n_pred = pred_values.size();
  std::size_t struct_left = 0;
  std::size_t pred_left = 0;
  Eigen::RowVectorXd sum_left;
  Eigen::RowVectorXd sum_total;
  if (y.embedded()) {
    sum_left = Eigen::RowVectorXd::Zero(y.embedding().cols());
    sum_total = sum_left;
    for (int i : order) sum_total += y.embedding().row(i);
  }

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double cut = cut_between(cuts[k], cuts[k + 1]);
    while (struct_left < n_struct && x(order[struct_left], feature) < cut) {
      if (y.embedded()) sum_left += y.embedding().row(order[struct_left]);
      ++struct_left;
    }
    while (pred_left < n_pred && pred_values[pred_left] < cut) ++pred_left;
    if (pred_left < static_cast<std::size_t>(min_leaf) ||
        n_pred - pred_left < static_cast<std::size_t>(min_leaf) ||
        struct_left == 0 || struct_left == n_struct) {
      continue;
    }
    double g;
    if (y.embedded()) {
      g = gain.from_sums(sum_left, static_cast<double>(struct_left),
                         sum_total - sum_left,
                         static_cast<double>(n_struct - struct_left));
    } else {
      std::span<const int> all(order);
      g = gain(all.first(struct_left), all.subspan(struct_left));
    }
    if (improves(g, best.gain)) {
      best.gain = g;
      best.rule = SplitRule{feature, RuleKind::kThreshold, cut, 0.0, 0.0};
    }
  }
  return best;
}

Candidate two_means_candidate(const Eigen::MatrixXd& x, const NodeSamples& node, int feature,
                              int min_leaf, const GainEvaluator& gain) {
  Candidate out;
  const std::vector<double> values = union_values(x, node, feature);
  const auto centers = two_means_1d(values);
  if (!centers) return out;
  const SplitRule rule{feature, RuleKind::kRepresentatives, 0.0,
                       centers->first, centers->second};
  std::size_t pred_left = 0;
  for (int i : node.prediction) pred_left += rule.goes_left(x(i, feature));
  const std::size_t pred_right = node.prediction.size() - pred_left;
  if (pred_left < static_cast<std::size_t>(min_leaf) ||
      pred_right < static_cast<std::size_t>(min_leaf)) {
    return out;
  }
  std::vector<int> left, right;
  partition(x, node.structure, rule, &left, &right);
  if (left.empty() || right.empty()) return out;
  out.rule = rule;
  out.gain = gain(left, right);
  return out;
}

std::optional<SplitRule> search(const Eigen::MatrixXd& x, const ResponseCache& y,
                                const NodeSamples& node,
                                std::span<const int> features,
                                const TreeConfig& config) {
  if (node.structure.size() < 2) return std::nullopt;
  const GainEvaluator gain(y, node.structure);
  Candidate best;
  for (int feature : features) {
    const Candidate c =
        config.split_method == SplitMethod::kExhaustive
            ? exhaustive_candidate(x, y, node, feature, config.min_leaf, gain)
            : two_means_candidate(x, node, feature, config.min_leaf, gain);
    if (improves(c.gain, best.gain)) best = c;
  }
  if (!(best.gain > kMinRelativeGain * y.magnitude())) return std::nullopt;
  return best.rule;
}

std::vector<int> draw_features(int num_features, int mtry, std::mt19937_64& rng) {
  std::vector<int> pool(num_features);
  std::iota(pool.begin(), pool.end(), 0);
  const int take = (mtry <= 0 || mtry >= num_features) ? num_features : mtry;
  if (take < num_features) {
    for (int k = 0; k < take; ++k) {
      std::uniform_int_distribution<int> pick(k, num_features - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
  }
  return pool;
}

void check_config(const TreeConfig& config, int num_features) {
  if (config.max_depth < 1) throw DomainError("max_depth must be at least 1");
  if (config.min_leaf < 1) throw DomainError("min_leaf must be at least 1");
  if (config.mtry < 0 || config.mtry > num_features) {
    throw DomainError("mtry must lie in [1, p]");
  }
}

}  // namespace

std::string_view to_string(SplitMethod method) {
  return method == SplitMethod::kExhaustive ? "exhaustive" : "two_means";
}

SplitMethod parse_split_method(std::string_view name) {
  if (name == "exhaustive") return SplitMethod::kExhaustive;
  if (name == "two_means") return SplitMethod::kTwoMeans;
  throw DomainError("unknown split method: " + std::string(name));
}

FrechetTree::FrechetTree(std::vector<TreeNode> nodes, TreeConfig config,
                         std::vector<int> subsample, std::vector<int> structure,
                         std::vector<int> prediction)
    : nodes_(std::move(nodes)),
      config_(config),
      subsample_(std::move(subsample)),
      structure_(std::move(structure)),
      prediction_(std::move(prediction)) {
  if (nodes_.empty()) throw DomainError("tree has no nodes");
}

int FrechetTree::leaf_index(std::span<const double> x) const {
  int node = 0;
  while (!nodes_[node].is_leaf()) {
    const SplitRule& rule = *nodes_[node].rule;
    if (rule.feature < 0 || static_cast<std::size_t>(rule.feature) >= x.size()) {
      throw DomainError("query has too few features");
    }
    node = rule.goes_left(x[rule.feature]) ? nodes_[node].left
                                           : nodes_[node].right;
  }
  return node;
}

std::vector<int> FrechetTree::leaf_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) out.push_back(static_cast<int>(i));
  }
  return out;
}

double split_gain_exhaustive(const Eigen::MatrixXd& x, const ResponseCache& y,
                             std::span<const int> samples, int feature,
                             double threshold) {
  const SplitRule rule{feature, RuleKind::kThreshold, threshold, 0.0, 0.0};
  std::vector<int> left, right;
  partition(x, samples, rule, &left, &right);
  if (left.empty() || right.empty()) {
    throw DomainError("split leaves a child empty");
  }
  return GainEvaluator(y, samples)(left, right);
}

std::optional<std::pair<double, double>> two_means_1d(
    std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  if (v.empty() || v.front() == v.back()) return std::nullopt;
  const std::size_t n = v.size();

  if (n <= kExactTwoMeansLimit) {
    // Optimal 1-D partitions are contiguous in sorted order.
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      prefix[i + 1] = prefix[i] + v[i];
      prefix_sq[i + 1] = prefix_sq[i] + v[i] * v[i];
    }
    auto sse = [&](std::size_t lo, std::size_t hi) {
      const double s = prefix[hi] - prefix[lo];
      return prefix_sq[hi] - prefix_sq[lo] - s * s / static_cast<double>(hi - lo);
    };
    std::size_t best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k) {
      if (v[k - 1] == v[k]) continue;
      const double cost = sse(0, k) + sse(k, n);
      if (cost < best) {
        best = cost;
        best_k = k;
      }
    }
    return std::make_pair(prefix[best_k] / static_cast<double>(best_k),
                          (prefix[n] - prefix[best_k]) /
                              static_cast<double>(n - best_k));
  }

  double left = v.front();
  double right = v.back();
  std::size_t split = 0;
  for (int it = 0; it < kLloydIterations; ++it) {
    // Sorted values: the left cluster is a prefix.
    std::size_t k = 0;
    while (k < n && std::abs(v[k] - left) <= std::abs(v[k] - right)) ++k;
    if (k == split) break;
    split = k;
    left = std::accumulate(v.begin(), v.begin() + k, 0.0) / static_cast<double>(k);
    right = std::accumulate(v.begin() + k, v.end(), 0.0) /
            static_cast<double>(n - k);
  }
  return std::make_pair(left, right);
}

TwoMeansSplit split_two_means(const Eigen::MatrixXd& x, const ResponseCache& y,
                              std::span<const int> samples, int feature) {
  const auto centers = two_means_1d(feature_values(x, samples, feature));
  if (!centers) {
    throw DomainError("feature is constant within the node; no split available");
  }
  const SplitRule rule{feature, RuleKind::kRepresentatives, 0.0, centers->first,
                       centers->second};
  std::vector<int> left, right;
  partition(x, samples, rule, &left, &right);
  return {centers->first, centers->second, GainEvaluator(y, samples)(left, right)};
}

std::optional<SplitRule> best_split(const Eigen::MatrixXd& x,
                                    const ResponseCache& y,
                                    std::span<const int> samples,
                                    std::span<const int> candidate_features,
                                    const TreeConfig& config) {
  if (candidate_features.empty()) {
    throw DomainError("best_split needs at least one candidate feature");
  }
  return search(x, y, NodeSamples{samples, samples, false}, candidate_features,
                config);
}

FrechetTree grow_tree(const Eigen::MatrixXd& x, const ResponseCache& y,
                      std::span<const int> subsample, const TreeConfig& config) {
  const int p = static_cast<int>(x.cols());
  check_config(config, p);
  if (subsample.empty()) throw DomainError("cannot grow a tree on no samples");
  for (int i : subsample) {
    if (i < 0 || i >= x.rows()) throw DomainError("subsample index out of range");
  }
  std::mt19937_64 rng(config.seed);

  std::vector<int> structure(subsample.begin(), subsample.end());
  std::vector<int> prediction;
  std::vector<int> structure_ids, prediction_ids;
  if (config.honest &&
      subsample.size() < 2 * static_cast<std::size_t>(config.min_leaf)) {
    throw DomainError("honest tree needs a subsample of at least 2 * min_leaf");
  }
  if (config.honest) {
    // Halves are formed over distinct indices so that no sample sits on both
    // sides; repeated draws follow their index.
    std::vector<int> distinct = structure;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::shuffle(distinct.begin(), distinct.end(), rng);
    const std::size_t n_struct = (distinct.size() + 1) / 2;
    structure_ids.assign(distinct.begin(), distinct.begin() + n_struct);
    prediction_ids.assign(distinct.begin() + n_struct, distinct.end());
    std::sort(structure_ids.begin(), structure_ids.end());
    std::sort(prediction_ids.begin(), prediction_ids.end());
    std::vector<int> s, q;
    for (int i : subsample) {
      (std::binary_search(structure_ids.begin(), structure_ids.end(), i) ? s : q)
          .push_back(i);
    }
    if (q.empty()) {
      throw DomainError("honest tree needs at least two distinct samples");
    }
    structure = std::move(s);
    prediction = std::move(q);
  }

  struct Work {
    int node;
    std::vector<int> structure;
    std::vector<int> prediction;
  };
  std::vector<TreeNode> nodes(1);
  std::deque<Work> queue;
  queue.push_back({0, std::move(structure), std::move(prediction)});
  while (!queue.empty()) {
    Work work = std::move(queue.front());
    queue.pop_front();
    const int depth = nodes[work.node].depth;
    const std::vector<int>& pred =
        config.honest ? work.prediction : work.structure;
    std::optional<SplitRule> rule;
    if (depth < config.max_depth &&
        pred.size() >= 2 * static_cast<std::size_t>(config.min_leaf)) {
      const std::vector<int> features = draw_features(p, config.mtry, rng);
      rule = search(x, y, NodeSamples{work.structure, pred, config.honest},
                    features, config);
    }
    if (!rule) {
      TreeNode& leaf = nodes[work.node];
      leaf.samples = pred;
      std::sort(leaf.samples.begin(), leaf.samples.end());
      continue;
    }
    Work left{static_cast<int>(nodes.size()), {}, {}};
    Work right{static_cast<int>(nodes.size()) + 1, {}, {}};
    partition(x, work.structure, *rule, &left.structure, &right.structure);
    if (config.honest) {
      partition(x, work.prediction, *rule, &left.prediction, &right.prediction);
    }
    nodes[work.node].rule = rule;
    nodes[work.node].left = left.node;
    nodes[work.node].right = right.node;
    nodes.push_back(TreeNode{std::nullopt, -1, -1, depth + 1, {}});
    nodes.push_back(TreeNode{std::nullopt, -1, -1, depth + 1, {}});
    queue.push_back(std::move(left));
    queue.push_back(std::move(right));
  }
  return FrechetTree(std::move(nodes), config,
                     std::vector<int>(subsample.begin(), subsample.end()),
                     std::move(structure_ids), std::move(prediction_ids));
}

MeanResult tree_predict(const FrechetTree& tree, std::span<const double> x,
                        const MetricSpace& space,
                        std::span<const MetricObject> responses,
                        const SolverOptions& options) {
  return frechet_mean(space, responses, tree.leaf_for(x), options);
}

}  // namespace frechet
