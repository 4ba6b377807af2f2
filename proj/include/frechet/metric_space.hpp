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

#ifndef FRECHET_METRIC_SPACE_HPP_
#define FRECHET_METRIC_SPACE_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace frechet {

// Metric geometries for random objects: 1-D distributions through their
// quantile functions, SPD matrices and points on the unit sphere.

enum class SpaceKind {
  kWasserstein1D,
  kSpdLogCholesky,
  kSpdAffineInvariant,
  kSphereGeodesic,
};

// Quadrature weight applied to the discretized Wasserstein distance.
// kRiemann uses 1/m per grid point, kEuclidean the raw sum of squares.
enum class WassersteinNorm { kRiemann, kEuclidean };

struct MetricSpace {
  SpaceKind kind = SpaceKind::kWasserstein1D;
  // Grid size m, matrix order, or ambient dimension q.
  int dimension = 21;
  WassersteinNorm normalization = WassersteinNorm::kRiemann;

  static MetricSpace wasserstein(int grid_size = 21,
                                 WassersteinNorm norm = WassersteinNorm::kRiemann);
  static MetricSpace log_cholesky(int order);
  static MetricSpace affine_invariant(int order);
  static MetricSpace sphere(int ambient_dimension = 3);

  bool is_spd() const {
    return kind == SpaceKind::kSpdLogCholesky ||
           kind == SpaceKind::kSpdAffineInvariant;
  }
  // Number of reals in the serialized form of one object.
  int serialized_size() const;
  // True when the metric is the Euclidean distance of a fixed embedding.
  bool has_euclidean_embedding() const {
    return kind == SpaceKind::kWasserstein1D ||
           kind == SpaceKind::kSpdLogCholesky;
  }

  friend bool operator==(const MetricSpace&, const MetricSpace&) = default;
};

std::string_view to_string(SpaceKind kind);
SpaceKind parse_space_kind(std::string_view name);
std::string_view to_string(WassersteinNorm norm);
WassersteinNorm parse_wasserstein_norm(std::string_view name);

// Quantile levels of a distribution on a fixed grid; nondecreasing.
struct QuantileObject {
  Eigen::VectorXd values;
};

// Symmetric positive-definite matrix.
struct SpdObject {
  Eigen::MatrixXd matrix;
};

// Unit vector.
struct SphereObject {
  Eigen::VectorXd coords;
};

using MetricObject = std::variant<QuantileObject, SpdObject, SphereObject>;

// Raised when an input violates the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cholesky failed at `pivot` (0-based) with the given non-positive value.
class NotPositiveDefinite : public DomainError {
 public:
  NotPositiveDefinite(int pivot, double value);
  int pivot() const { return pivot_; }
  double value() const { return value_; }

 private:
  int pivot_;
  double value_;
};

// Builds and validates an object from its serialized row. Throws DomainError
// if the row does not satisfy the invariants of `space`.
MetricObject make_object(const MetricSpace& space, std::span<const double> row);
// Row-major serialization matching make_object.
std::vector<double> serialize(const MetricSpace& space, const MetricObject& object);
// Checks dimension and type invariants; throws DomainError on violation.
void validate(const MetricSpace& space, const MetricObject& object);

double distance(const MetricSpace& space, const MetricObject& a,
                const MetricObject& b);

inline double squared_distance(const MetricSpace& space, const MetricObject& a,
                               const MetricObject& b) {
  const double d = distance(space, a, b);
  return d * d;
}

// ---------------------------------------------------------------------------
// Geometry kernels.

// Lower-triangular L with positive diagonal, L * L^T = y.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& y);

// Symmetric matrix functions through the eigendecomposition.
Eigen::MatrixXd matrix_log(const Eigen::MatrixXd& spd);
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& symmetric);
Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& spd);
Eigen::MatrixXd matrix_inv_sqrt(const Eigen::MatrixXd& spd);

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-10);

// Riemannian exponential / logarithm on the unit sphere.
Eigen::VectorXd sphere_exp(const Eigen::VectorXd& base,
                           const Eigen::VectorXd& tangent);
Eigen::VectorXd sphere_log(const Eigen::VectorXd& base,
                           const Eigen::VectorXd& target);

// Euclidean projection onto the nondecreasing cone (pool adjacent violators).
Eigen::VectorXd isotonic_project(const Eigen::VectorXd& values);

// Coordinates of the isometric Euclidean embedding. Only valid when
// space.has_euclidean_embedding(). For Log-Cholesky the layout is the
// strictly-lower entries of the Cholesky factor (row-major) followed by the
// log of its diagonal.
Eigen::VectorXd embed(const MetricSpace& space, const MetricObject& object);
// Inverse of embed. For Wasserstein the result is projected onto the
// nondecreasing cone.
MetricObject unembed(const MetricSpace& space, const Eigen::VectorXd& coords);
int embedding_dimension(const MetricSpace& space);

}  // namespace frechet

#endif  // FRECHET_METRIC_SPACE_HPP_
