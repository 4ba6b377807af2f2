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

#ifndef FRECHET_REGRESSORS_HPP_
#define FRECHET_REGRESSORS_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "frechet/dataset.hpp"
#include "frechet/forest.hpp"
#include "frechet/frechet_mean.hpp"

namespace frechet {

enum class EstimatorKind {
  kRfwlcfr,    // forest-weighted local constant
  kRfwllfr,    // forest-weighted local linear
  kFrf,        // mean of per-tree leaf means
  kGfr,        // global Fréchet regression
  kNw,         // Nadaraya-Watson
  kLfrKernel,  // kernel local linear
};

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);
bool is_forest_kind(EstimatorKind kind);
bool is_kernel_kind(EstimatorKind kind);

enum class KernelKind { kEpanechnikov, kGaussian };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

// The local design X~^T A X~ could not be inverted even after ridge repair.
class SingularDesign : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Prediction {
  MetricObject value;
  bool converged = true;
  // Weights handed to the final Fréchet-mean solve: one per training sample,
  // or one per tree for FRF.
  WeightVector weights;
  // RFWLLFR only: the local design was singular and alpha was used instead.
  bool fell_back = false;
};

struct LocalLinearWeights {
  WeightVector weights;
  bool ridged = false;
};

// t_i = e1^T (X~^T A X~)^{-1} (1, X_i - x)^T alpha_i with A = diag(alpha).
// A ridge of 1e-8 times the mean slope variance is added to the slope block
// (never the intercept) when the design is numerically
// singular; throws SingularDesign if that does not help.
LocalLinearWeights local_linear_weights(const Eigen::MatrixXd& x,
                                        std::span<const double> query,
                                        const WeightVector& alpha);

Prediction predict_rfwlcfr(const ForestModel& model, std::span<const double> x,
                           const SolverOptions& options = {});
Prediction predict_rfwllfr(const ForestModel& model, std::span<const double> x,
                           const SolverOptions& options = {});
Prediction predict_frf(const ForestModel& model, std::span<const double> x,
                       const SolverOptions& options = {});

struct GfrModel {
  std::shared_ptr<const Dataset> data;
  Eigen::VectorXd mean;
  // Inverse of the 1/n predictor covariance.
  Eigen::MatrixXd covariance_inverse;
  bool ridged = false;
};

GfrModel fit_gfr(std::shared_ptr<const Dataset> data);
// s_in(x) / n with s_in(x) = 1 + (X_i - mean)^T Sigma^{-1} (x - mean).
WeightVector gfr_weights(const GfrModel& model, std::span<const double> x);
Prediction predict_gfr(const GfrModel& model, std::span<const double> x,
                       const SolverOptions& options = {});

// Product-kernel smoothing weights K_h(X_i - x), normalized to sum 1.
// Throws DomainError when no training point carries kernel mass.
WeightVector smoothing_weights(const Eigen::MatrixXd& x, std::span<const double> query,
                               double bandwidth, KernelKind kernel);

Prediction predict_nw(const Dataset& data, std::span<const double> x,
                      double bandwidth, KernelKind kernel,
                      const SolverOptions& options = {});
Prediction predict_lfr_kernel(const Dataset& data, std::span<const double> x,
                              double bandwidth, KernelKind kernel,
                              const SolverOptions& options = {});

// Everything needed to fit one estimator.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kRfwlcfr;
  ForestConfig forest;
  double bandwidth = 0.2;
  KernelKind kernel = KernelKind::kEpanechnikov;
  SolverOptions solver;
};

class RegressionModel {
 public:
  static RegressionModel fit(const EstimatorSpec& spec,
                             std::shared_ptr<const Dataset> data);
  // Wraps an existing forest (e.g. one loaded from disk).
  static RegressionModel from_forest(const EstimatorSpec& spec, ForestModel forest);

  const EstimatorSpec& spec() const { return spec_; }
  const Dataset& data() const { return *data_; }
  const ForestModel* forest() const { return forest_ ? &*forest_ : nullptr; }

  Prediction predict(std::span<const double> x) const;
  // Same as predict() with the kind overridden; forest kinds share the forest.
  Prediction predict_as(EstimatorKind kind, std::span<const double> x) const;

 private:
  EstimatorSpec spec_;
  std::shared_ptr<const Dataset> data_;
  std::optional<ForestModel> forest_;
  std::optional<GfrModel> gfr_;
};

// ---------------------------------------------------------------------------
// Cross-validation.

struct TuningCell {
  int max_depth = kUnlimitedDepth;
  int mtry = 0;
  double bandwidth = 0.0;

  friend bool operator==(const TuningCell&, const TuningCell&) = default;
};

struct CvRow {
  TuningCell cell;
  // Mean and sample standard deviation of the fold errors; infinite when
  // the cell failed.
  double mean_error = 0.0;
  double sd_error = 0.0;
  std::vector<double> fold_errors;
  bool failed = false;
};

struct TuningResult {
  std::vector<CvRow> table;
  int best = 0;
  EstimatorSpec best_spec;
};

// Default grids: forest kinds get depth 3..ceil(log2 n) crossed with
// mtry in {1, ceil(p/3), ceil(sqrt(p)), p}; kernel kinds get a bandwidth
// ladder; GFR has a single empty cell.
std::vector<TuningCell> default_grid(EstimatorKind kind, int n, int p);

// Fold label of each sample: a seeded permutation dealt round-robin.
std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed);

// Mean of d^2(prediction, held-out response) over a fold.
TuningResult tune_cv(const Dataset& data, const EstimatorSpec& base,
                     const std::vector<TuningCell>& grid, int folds,
                     std::uint64_t seed, int threads = 1);

// Tunes several forest kinds at once, growing each (cell, fold) forest a
// single time. Returns one result per entry of `kinds`, in order.
std::vector<TuningResult> tune_cv_forest_kinds(
    const Dataset& data, const EstimatorSpec& base,
    const std::vector<EstimatorKind>& kinds, const std::vector<TuningCell>& grid,
    int folds, std::uint64_t seed, int threads = 1);

EstimatorSpec apply_cell(EstimatorSpec spec, const TuningCell& cell);

}  // namespace frechet

#endif  // FRECHET_REGRESSORS_HPP_
