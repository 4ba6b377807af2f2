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

#include "frechet/model_io.hpp"

#include <string>

#include "frechet/io.hpp"

namespace frechet {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "frechet-forest-model";
constexpr int kVersion = 1;

template <typename T>
void read_if(const json& j, const char* key, T* out) {
  if (j.contains(key) && !j.at(key).is_null()) *out = j.at(key).get<T>();
}

json depth_to_json(int depth) {
  return depth == kUnlimitedDepth ? json(nullptr) : json(depth);
}

int depth_from_json(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).is_null() ? kUnlimitedDepth : j.at(key).get<int>();
}

json objects_to_json(const MetricSpace& space, const std::vector<MetricObject>& ys) {
  json rows = json::array();
  for (const MetricObject& y : ys) rows.push_back(serialize(space, y));
  return rows;
}

}  // namespace

json space_to_json(const MetricSpace& space) {
  json j{{"kind", to_string(space.kind)}, {"dimension", space.dimension}};
  if (space.kind == SpaceKind::kWasserstein1D) {
    j["normalization"] = to_string(space.normalization);
  }
  return j;
}

MetricSpace space_from_json(const json& j) {
  MetricSpace space;
  space.kind = parse_space_kind(j.at("kind").get<std::string>());
  switch (space.kind) {
    case SpaceKind::kWasserstein1D: space.dimension = 21; break;
    case SpaceKind::kSphereGeodesic: space.dimension = 3; break;
    default: space.dimension = 2; break;
  }
  read_if(j, "dimension", &space.dimension);
  if (j.contains("normalization")) {
    space.normalization =
        parse_wasserstein_norm(j.at("normalization").get<std::string>());
  }
  if (space.dimension < 1) throw DomainError("space dimension must be at least 1");
  return space;
}

json spec_to_json(const EstimatorSpec& spec) {
  const ForestConfig& f = spec.forest;
  return json{
      {"kind", to_string(spec.kind)},
      {"bandwidth", spec.bandwidth},
      {"kernel", to_string(spec.kernel)},
      {"solver",
       {{"max_iterations", spec.solver.max_iterations},
        {"tolerance", spec.solver.tolerance}}},
      {"forest",
       {{"num_trees", f.num_trees},
        {"subsample_mode", to_string(f.subsample_mode)},
        {"subsample_size", f.subsample_size},
        {"master_seed", f.master_seed},
        {"max_depth", depth_to_json(f.tree.max_depth)},
        {"min_leaf", f.tree.min_leaf},
        {"mtry", f.tree.mtry},
        {"split_method", to_string(f.tree.split_method)},
        {"honest", f.tree.honest}}},
  };
}

EstimatorSpec spec_from_json(const json& j, const EstimatorSpec& defaults) {
  EstimatorSpec spec = defaults;
  if (j.contains("kind")) spec.kind = parse_estimator_kind(j.at("kind").get<std::string>());
  read_if(j, "bandwidth", &spec.bandwidth);
  if (j.contains("kernel")) spec.kernel = parse_kernel_kind(j.at("kernel").get<std::string>());
  if (j.contains("solver")) {
    read_if(j.at("solver"), "max_iterations", &spec.solver.max_iterations);
    read_if(j.at("solver"), "tolerance", &spec.solver.tolerance);
  }
  if (j.contains("forest")) {
    const json& f = j.at("forest");
    ForestConfig& c = spec.forest;
    read_if(f, "num_trees", &c.num_trees);
    if (f.contains("subsample_mode")) {
      c.subsample_mode = parse_subsample_mode(f.at("subsample_mode").get<std::string>());
    }
    read_if(f, "subsample_size", &c.subsample_size);
    read_if(f, "master_seed", &c.master_seed);
    c.tree.max_depth = depth_from_json(f, "max_depth", c.tree.max_depth);
    read_if(f, "min_leaf", &c.tree.min_leaf);
    read_if(f, "mtry", &c.tree.mtry);
    if (f.contains("split_method")) {
      c.tree.split_method = parse_split_method(f.at("split_method").get<std::string>());
    }
    read_if(f, "honest", &c.tree.honest);
  }
  return spec;
}

json tree_to_json(const FrechetTree& tree) {
  json nodes = json::array();
  for (const TreeNode& node : tree.nodes()) {
    json n{{"depth", node.depth}};
    if (node.is_leaf()) {
      n["samples"] = node.samples;
    } else {
      const SplitRule& r = *node.rule;
      n["feature"] = r.feature;
      if (r.kind == RuleKind::kThreshold) {
        n["rule"] = "threshold";
        n["threshold"] = r.threshold;
      } else {
        n["rule"] = "representatives";
        n["left_center"] = r.left_center;
        n["right_center"] = r.right_center;
      }
      n["left"] = node.left;
      n["right"] = node.right;
    }
    nodes.push_back(std::move(n));
  }
  return json{{"seed", tree.config().seed},
              {"subsample", tree.subsample()},
              {"structure", tree.structure_indices()},
              {"prediction", tree.prediction_indices()},
              {"nodes", std::move(nodes)}};
}

FrechetTree tree_from_json(const json& j, const TreeConfig& config) {
  TreeConfig c = config;
  c.seed = j.at("seed").get<std::uint64_t>();
  std::vector<TreeNode> nodes;
  for (const json& n : j.at("nodes")) {
    TreeNode node;
    node.depth = n.at("depth").get<int>();
    if (n.contains("samples")) {
      node.samples = n.at("samples").get<std::vector<int>>();
      if (node.samples.empty()) throw DomainError("model has an empty leaf");
    } else {
      SplitRule r;
      r.feature = n.at("feature").get<int>();
      const std::string kind = n.at("rule").get<std::string>();
      if (kind == "threshold") {
        r.kind = RuleKind::kThreshold;
        r.threshold = n.at("threshold").get<double>();
      } else if (kind == "representatives") {
        r.kind = RuleKind::kRepresentatives;
        r.left_center = n.at("left_center").get<double>();
        r.right_center = n.at("right_center").get<double>();
      } else {
        throw DomainError("unknown split rule: " + kind);
      }
      node.rule = r;
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    }
    nodes.push_back(std::move(node));
  }
  const int count = static_cast<int>(nodes.size());
  for (int k = 0; k < count; ++k) {
    if (nodes[k].is_leaf()) continue;
    if (nodes[k].left <= k || nodes[k].left >= count || nodes[k].right <= k ||
        nodes[k].right >= count) {
      throw DomainError("model tree has an invalid child index");
    }
  }
  return FrechetTree(std::move(nodes), c, j.at("subsample").get<std::vector<int>>(),
                     j.at("structure").get<std::vector<int>>(),
                     j.at("prediction").get<std::vector<int>>());
}

json model_to_json(const RegressionModel& model, const DataSource& source) {
  const Dataset& data = model.data();
  json j{{"format", kFormat},
         {"version", kVersion},
         {"estimator", spec_to_json(model.spec())},
         {"space", space_to_json(data.space)}};
  if (source.inline_data) {
    json x = json::array();
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
      std::vector<double> row(data.x.cols());
      for (Eigen::Index c = 0; c < data.x.cols(); ++c) row[c] = data.x(i, c);
      x.push_back(std::move(row));
    }
    j["data"] = {{"inline", true}, {"x", std::move(x)},
                 {"y", objects_to_json(data.space, data.y)}};
  } else {
    j["data"] = {{"inline", false},
                 {"x_path", source.x_path},
                 {"y_path", source.y_path},
                 {"header", source.header},
                 {"rows", data.size()}};
  }
  if (const ForestModel* forest = model.forest()) {
    json trees = json::array();
    for (const FrechetTree& tree : forest->trees()) trees.push_back(tree_to_json(tree));
    j["trees"] = std::move(trees);
  }
  return j;
}

RegressionModel model_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (j.value("format", "") != kFormat) {
    throw DomainError("not a frechet-forest model document");
  }
  if (j.value("version", 0) != kVersion) {
    throw DomainError("unsupported model version");
  }
  const EstimatorSpec spec = spec_from_json(j.at("estimator"));
  const MetricSpace space = space_from_json(j.at("space"));
  const json& d = j.at("data");
  auto data = std::make_shared<Dataset>();
  if (d.at("inline").get<bool>()) {
    data->space = space;
    const auto x = d.at("x").get<std::vector<std::vector<double>>>();
    if (x.empty()) throw DomainError("model has no training data");
    data->x.resize(x.size(), x.front().size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() != x.front().size()) throw DomainError("ragged inline X");
      for (std::size_t c = 0; c < x[i].size(); ++c) data->x(i, c) = x[i][c];
    }
    const auto y = d.at("y").get<std::vector<std::vector<double>>>();
    for (std::size_t i = 0; i < y.size(); ++i) {
      try {
        data->y.push_back(make_object(space, y[i]));
      } catch (const DomainError& e) {
        throw DomainError("inline Y row " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  } else {
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    *data = load_dataset(resolve(d.at("x_path").get<std::string>()),
                         resolve(d.at("y_path").get<std::string>()), space,
                         d.value("header", false));
    if (d.contains("rows") && d.at("rows").get<int>() != data->size()) {
      throw DomainError("referenced training data changed size since the fit");
    }
  }
  check_dataset(*data);
  std::shared_ptr<const Dataset> shared = std::move(data);

  if (!is_forest_kind(spec.kind)) return RegressionModel::fit(spec, shared);
  std::vector<FrechetTree> trees;
  for (const json& t : j.at("trees")) {
    trees.push_back(tree_from_json(t, spec.forest.tree));
  }
  ForestModel forest(shared, spec.forest, std::move(trees));
  return RegressionModel::from_forest(spec, std::move(forest));
}

}  // namespace frechet
