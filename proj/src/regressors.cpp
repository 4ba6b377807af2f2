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

#include "frechet/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "frechet/parallel.hpp"

namespace frechet {
namespace {

constexpr double kRidge = 1e-8;
constexpr double kPivotFloor = 1e-12;

// LDLT of a symmetric positive semi-definite matrix. When a pivot is
// negligible, the trailing block from `first` on receives a ridge scaled by
// its mean diagonal; leading rows stay exact so the identities they encode
// survive. Returns false if the repair fails.
bool factor_with_ridge(Eigen::MatrixXd m, Eigen::Index first,
                       Eigen::LDLT<Eigen::MatrixXd>* ldlt, bool* ridged) {
  auto healthy = [](const Eigen::LDLT<Eigen::MatrixXd>& f) {
    if (f.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = f.vectorD();
    const double top = d.cwiseAbs().maxCoeff();
    return top > 0.0 && d.minCoeff() > kPivotFloor * top;
  };
  *ridged = false;
  ldlt->compute(m);
  if (healthy(*ldlt)) return true;
  const Eigen::Index count = m.rows() - first;
  const double scale = m.diagonal().tail(count).sum() / static_cast<double>(count);
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  m.diagonal().tail(count).array() += kRidge * scale;
  *ridged = true;
  ldlt->compute(m);
  return ldlt->info() == Eigen::Success && ldlt->vectorD().minCoeff() > 0.0;
}

void check_query(const Eigen::MatrixXd& x, std::span<const double> query) {
  if (static_cast<Eigen::Index>(query.size()) != x.cols()) {
    throw DomainError("query has " + std::to_string(query.size()) +
                      " features, training data has " + std::to_string(x.cols()));
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

Prediction solve(const Dataset& data, WeightVector weights,
                 const SolverOptions& options) {
  MeanResult mean = weighted_frechet_mean(data.space, data.y, as_span(weights), options);
  return {std::move(mean.value), mean.converged, std::move(weights), false};
}

double kernel_value(double u, KernelKind kernel) {
  if (kernel == KernelKind::kGaussian) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  }
  return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double e : v) ss += (e - mean) * (e - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void finish_row(CvRow* row) {
  row->failed = std::any_of(row->fold_errors.begin(), row->fold_errors.end(),
                            [](double e) { return !std::isfinite(e); });
  if (row->failed) {
    row->mean_error = std::numeric_limits<double>::infinity();
    row->sd_error = std::numeric_limits<double>::infinity();
    return;
  }
  row->mean_error =
      std::accumulate(row->fold_errors.begin(), row->fold_errors.end(), 0.0) /
      static_cast<double>(row->fold_errors.size());
  row->sd_error = sample_sd(row->fold_errors, row->mean_error);
}

int argmin_row(const std::vector<CvRow>& table) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(table.size()); ++c) {
    if (table[c].mean_error < table[best].mean_error) best = c;
  }
  return best;
}

struct FoldSplit {
  std::shared_ptr<const Dataset> train;
  std::vector<int> test_rows;
};

std::vector<FoldSplit> make_folds(const Dataset& data, int folds,
                                  std::uint64_t seed) {
  const std::vector<int> label = fold_assignment(data.size(), folds, seed);
  std::vector<FoldSplit> out(folds);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train;
    for (int i = 0; i < data.size(); ++i) {
      (label[i] == f ? out[f].test_rows : train).push_back(i);
    }
    out[f].train = std::make_shared<const Dataset>(subset_rows(data, train));
  }
  return out;
}

double fold_error(const RegressionModel& model, EstimatorKind kind,
                  const Dataset& data, const std::vector<int>& rows) {
  double total = 0.0;
  for (int i : rows) {
    const Eigen::VectorXd xi = data.x.row(i).transpose();
    const Prediction p = model.predict_as(kind, row_span(xi));
    total += squared_distance(data.space, p.value, data.y[i]);
  }
  return total / static_cast<double>(rows.size());
}

void check_tuning_inputs(const Dataset& data, const std::vector<TuningCell>& grid,
                         int folds) {
  if (folds < 2) throw DomainError("cross-validation needs at least 2 folds");
  if (folds > data.size()) throw DomainError("more folds than samples");
  if (grid.empty()) throw DomainError("tuning grid is empty");
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kRfwlcfr: return "rfwlcfr";
    case EstimatorKind::kRfwllfr: return "rfwllfr";
    case EstimatorKind::kFrf: return "frf";
    case EstimatorKind::kGfr: return "gfr";
    case EstimatorKind::kNw: return "nw";
    case EstimatorKind::kLfrKernel: return "lfr";
  }
  return "?";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  for (EstimatorKind k :
       {EstimatorKind::kRfwlcfr, EstimatorKind::kRfwllfr, EstimatorKind::kFrf,
        EstimatorKind::kGfr, EstimatorKind::kNw, EstimatorKind::kLfrKernel}) {
    if (name == to_string(k)) return k;
  }
  throw DomainError("unknown estimator: " + std::string(name));
}

bool is_forest_kind(EstimatorKind kind) {
  return kind == EstimatorKind::kRfwlcfr || kind == EstimatorKind::kRfwllfr ||
         kind == EstimatorKind::kFrf;
}

bool is_kernel_kind(EstimatorKind kind) {
  return kind == EstimatorKind::kNw || kind == EstimatorKind::kLfrKernel;
}

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::kEpanechnikov ? "epanechnikov" : "gaussian";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "epanechnikov") return KernelKind::kEpanechnikov;
  if (name == "gaussian") return KernelKind::kGaussian;
  throw DomainError("unknown kernel: " + std::string(name));
}

LocalLinearWeights local_linear_weights(const Eigen::MatrixXd& x,
                                        std::span<const double> query,
                                        const WeightVector& alpha) {
  check_query(x, query);
  if (alpha.size() != x.rows()) {
    throw DomainError("alpha length does not match the training data");
  }
  if (!(alpha.sum() > 0.0)) throw DomainError("alpha has no positive mass");
  const Eigen::Index p = x.cols();
  const auto q = as_vector(query);

  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(p + 1, p + 1);
  Eigen::VectorXd z(p + 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (alpha[i] == 0.0) continue;
    z[0] = 1.0;
    z.tail(p) = x.row(i).transpose() - q;
    design.selfadjointView<Eigen::Lower>().rankUpdate(z, alpha[i]);
  }
  const Eigen::MatrixXd full = design.selfadjointView<Eigen::Lower>();

  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  LocalLinearWeights out;
  // The intercept row is left unridged so that sum(t) = 1 holds exactly.
  if (!factor_with_ridge(full, 1, &ldlt, &out.ridged)) {
    throw SingularDesign("local design is singular");
  }
  // First row of the inverse; M is symmetric so it equals M^{-1} e1.
  const Eigen::VectorXd row = ldlt.solve(Eigen::VectorXd::Unit(p + 1, 0));
  out.weights = WeightVector::Zero(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (alpha[i] == 0.0) continue;
    z[0] = 1.0;
    z.tail(p) = x.row(i).transpose() - q;
    out.weights[i] = alpha[i] * row.dot(z);
  }
  return out;
}

Prediction predict_rfwlcfr(const ForestModel& model, std::span<const double> x,
                           const SolverOptions& options) {
  check_query(model.data().x, x);
  return solve(model.data(), kernel_weights(model, x), options);
}

Prediction predict_rfwllfr(const ForestModel& model, std::span<const double> x,
                           const SolverOptions& options) {
  check_query(model.data().x, x);
  WeightVector alpha = kernel_weights(model, x);
  try {
    LocalLinearWeights t = local_linear_weights(model.data().x, x, alpha);
    return solve(model.data(), std::move(t.weights), options);
  } catch (const SingularDesign&) {
    Prediction p = solve(model.data(), std::move(alpha), options);
    p.fell_back = true;
    return p;
  }
}

Prediction predict_frf(const ForestModel& model, std::span<const double> x,
                       const SolverOptions& options) {
  check_query(model.data().x, x);
  const Dataset& data = model.data();
  std::vector<MetricObject> per_tree;
  per_tree.reserve(model.num_trees());
  bool converged = true;
  for (const FrechetTree& tree : model.trees()) {
    MeanResult leaf = tree_predict(tree, x, data.space, data.y, options);
    converged = converged && leaf.converged;
    per_tree.push_back(std::move(leaf.value));
  }
  WeightVector equal = WeightVector::Constant(model.num_trees(),
                                              1.0 / model.num_trees());
  MeanResult mean =
      weighted_frechet_mean(data.space, per_tree, as_span(equal), options);
  return {std::move(mean.value), converged && mean.converged, std::move(equal),
          false};
}

GfrModel fit_gfr(std::shared_ptr<const Dataset> data) {
  check_dataset(*data);
  const Eigen::MatrixXd& x = data->x;
  if (x.rows() <= x.cols()) {
    throw DomainError("global Fréchet regression needs n > p");
  }
  GfrModel model;
  model.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(x.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  if (!factor_with_ridge(cov, 0, &ldlt, &model.ridged)) {
    throw SingularDesign("predictor covariance is degenerate");
  }
  model.covariance_inverse =
      ldlt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  model.data = std::move(data);
  return model;
}

WeightVector gfr_weights(const GfrModel& model, std::span<const double> x) {
  const Eigen::MatrixXd& train = model.data->x;
  check_query(train, x);
  const Eigen::VectorXd direction =
      model.covariance_inverse * (as_vector(x) - model.mean);
  const double n = static_cast<double>(train.rows());
  WeightVector s(train.rows());
  for (Eigen::Index i = 0; i < train.rows(); ++i) {
    s[i] = (1.0 + (train.row(i).transpose() - model.mean).dot(direction)) / n;
  }
  return s;
}

Prediction predict_gfr(const GfrModel& model, std::span<const double> x,
                       const SolverOptions& options) {
  return solve(*model.data, gfr_weights(model, x), options);
}

WeightVector smoothing_weights(const Eigen::MatrixXd& x,
                               std::span<const double> query, double bandwidth,
                               KernelKind kernel) {
  check_query(x, query);
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  WeightVector w(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double k = 1.0;
    for (Eigen::Index j = 0; j < x.cols() && k > 0.0; ++j) {
      k *= kernel_value((x(i, j) - query[j]) / bandwidth, kernel);
    }
    w[i] = k;
  }
  const double total = w.sum();
  if (!(total > 0.0)) {
    throw DomainError("no training point within the kernel bandwidth");
  }
  return w / total;
}

Prediction predict_nw(const Dataset& data, std::span<const double> x,
                      double bandwidth, KernelKind kernel,
                      const SolverOptions& options) {
  return solve(data, smoothing_weights(data.x, x, bandwidth, kernel), options);
}

Prediction predict_lfr_kernel(const Dataset& data, std::span<const double> x,
                              double bandwidth, KernelKind kernel,
                              const SolverOptions& options) {
  const WeightVector alpha = smoothing_weights(data.x, x, bandwidth, kernel);
  return solve(data, local_linear_weights(data.x, x, alpha).weights, options);
}

RegressionModel RegressionModel::fit(const EstimatorSpec& spec,
                                     std::shared_ptr<const Dataset> data) {
  check_dataset(*data);
  RegressionModel model;
  model.spec_ = spec;
  model.data_ = data;
  if (is_forest_kind(spec.kind)) {
    model.forest_.emplace(fit_forest(data, spec.forest));
  } else if (spec.kind == EstimatorKind::kGfr) {
    model.gfr_.emplace(fit_gfr(data));
  } else if (!(spec.bandwidth > 0.0)) {
    throw DomainError("bandwidth must be positive");
  }
  return model;
}

RegressionModel RegressionModel::from_forest(const EstimatorSpec& spec,
                                             ForestModel forest) {
  if (!is_forest_kind(spec.kind)) {
    throw DomainError("a forest model needs a forest-based estimator");
  }
  RegressionModel model;
  model.spec_ = spec;
  model.data_ = forest.shared_data();
  model.forest_.emplace(std::move(forest));
  return model;
}

Prediction RegressionModel::predict(std::span<const double> x) const {
  return predict_as(spec_.kind, x);
}

Prediction RegressionModel::predict_as(EstimatorKind kind,
                                       std::span<const double> x) const {
  if (is_forest_kind(kind) && !forest_) {
    throw DomainError("model has no forest");
  }
  switch (kind) {
    case EstimatorKind::kRfwlcfr:
      return predict_rfwlcfr(*forest_, x, spec_.solver);
    case EstimatorKind::kRfwllfr:
      return predict_rfwllfr(*forest_, x, spec_.solver);
    case EstimatorKind::kFrf:
      return predict_frf(*forest_, x, spec_.solver);
    case EstimatorKind::kGfr:
      if (!gfr_) throw DomainError("model was not fitted for GFR");
      return predict_gfr(*gfr_, x, spec_.solver);
    case EstimatorKind::kNw:
      return predict_nw(*data_, x, spec_.bandwidth, spec_.kernel, spec_.solver);
    case EstimatorKind::kLfrKernel:
      return predict_lfr_kernel(*data_, x, spec_.bandwidth, spec_.kernel,
                                spec_.solver);
  }
  throw DomainError("unsupported estimator");
}

std::vector<TuningCell> default_grid(EstimatorKind kind, int n, int p) {
  std::vector<TuningCell> grid;
  if (is_forest_kind(kind)) {
    const int top = std::max(3, static_cast<int>(std::ceil(std::log2(std::max(n, 2)))));
    std::vector<int> mtry;
    for (int m : {1, (p + 2) / 3, static_cast<int>(std::ceil(std::sqrt(p))), p}) {
      if (std::find(mtry.begin(), mtry.end(), m) == mtry.end()) mtry.push_back(m);
    }
    for (int depth = 3; depth <= top; ++depth) {
      for (int m : mtry) grid.push_back({depth, m, 0.0});
    }
  } else if (is_kernel_kind(kind)) {
    for (double h : {0.1, 0.2, 0.3, 0.5, 1.0, 2.0}) {
      grid.push_back({kUnlimitedDepth, 0, h});
    }
  } else {
    grid.push_back({});
  }
  return grid;
}

std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> label(n);
  for (int k = 0; k < n; ++k) label[order[k]] = k % folds;
  return label;
}

EstimatorSpec apply_cell(EstimatorSpec spec, const TuningCell& cell) {
  if (is_forest_kind(spec.kind)) {
    spec.forest.tree.max_depth = cell.max_depth;
    spec.forest.tree.mtry = cell.mtry;
  } else if (is_kernel_kind(spec.kind)) {
    spec.bandwidth = cell.bandwidth;
  }
  return spec;
}

TuningResult tune_cv(const Dataset& data, const EstimatorSpec& base,
                     const std::vector<TuningCell>& grid, int folds,
                     std::uint64_t seed, int threads) {
  check_tuning_inputs(data, grid, folds);
  const std::vector<FoldSplit> splits = make_folds(data, folds, seed);
  const int cells = static_cast<int>(grid.size());
  std::vector<double> errors(static_cast<std::size_t>(cells) * folds);
  parallel_for(cells * folds, threads, [&](int task) {
    const int c = task / folds;
    const int f = task % folds;
    EstimatorSpec spec = apply_cell(base, grid[c]);
    spec.forest.threads = 1;
    try {
      const RegressionModel model = RegressionModel::fit(spec, splits[f].train);
      errors[task] = fold_error(model, spec.kind, data, splits[f].test_rows);
    } catch (const std::exception&) {
      errors[task] = std::numeric_limits<double>::infinity();
    }
  });

  TuningResult result;
  for (int c = 0; c < cells; ++c) {
    CvRow row;
    row.cell = grid[c];
    row.fold_errors.assign(errors.begin() + c * folds,
                           errors.begin() + (c + 1) * folds);
    finish_row(&row);
    result.table.push_back(std::move(row));
  }
  result.best = argmin_row(result.table);
  result.best_spec = apply_cell(base, grid[result.best]);
  return result;
}

std::vector<TuningResult> tune_cv_forest_kinds(
    const Dataset& data, const EstimatorSpec& base,
    const std::vector<EstimatorKind>& kinds, const std::vector<TuningCell>& grid,
    int folds, std::uint64_t seed, int threads) {
  check_tuning_inputs(data, grid, folds);
  for (EstimatorKind k : kinds) {
    if (!is_forest_kind(k)) throw DomainError("shared tuning needs forest kinds");
  }
  const std::vector<FoldSplit> splits = make_folds(data, folds, seed);
  const int cells = static_cast<int>(grid.size());
  const int num_kinds = static_cast<int>(kinds.size());
  // errors[(task * num_kinds) + k]
  std::vector<double> errors(static_cast<std::size_t>(cells) * folds * num_kinds);
  parallel_for(cells * folds, threads, [&](int task) {
    const int c = task / folds;
    const int f = task % folds;
    EstimatorSpec spec = base;
    spec.kind = EstimatorKind::kRfwlcfr;
    spec = apply_cell(spec, grid[c]);
    spec.forest.threads = 1;
    std::optional<RegressionModel> model;
    try {
      model.emplace(RegressionModel::fit(spec, splits[f].train));
    } catch (const std::exception&) {
    }
    for (int k = 0; k < num_kinds; ++k) {
      double& e = errors[static_cast<std::size_t>(task) * num_kinds + k];
      e = std::numeric_limits<double>::infinity();
      if (!model) continue;
      try {
        e = fold_error(*model, kinds[k], data, splits[f].test_rows);
      } catch (const std::exception&) {
      }
    }
  });

  std::vector<TuningResult> results(num_kinds);
  for (int k = 0; k < num_kinds; ++k) {
    EstimatorSpec kind_base = base;
    kind_base.kind = kinds[k];
    for (int c = 0; c < cells; ++c) {
      CvRow row;
      row.cell = grid[c];
      for (int f = 0; f < folds; ++f) {
        row.fold_errors.push_back(
            errors[static_cast<std::size_t>(c * folds + f) * num_kinds + k]);
      }
      finish_row(&row);
      results[k].table.push_back(std::move(row));
    }
    results[k].best = argmin_row(results[k].table);
    results[k].best_spec = apply_cell(kind_base, grid[results[k].best]);
  }
  return results;
}

}  // namespace frechet
