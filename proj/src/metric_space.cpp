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

#include "frechet/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frechet {
namespace {

constexpr double kUnitNormTolerance = 1e-10;

std::string describe_pivot(int pivot, double value) {
  std::ostringstream os;
  os << "matrix is not positive definite: pivot " << pivot << " is " << value;
  return os.str();
}

void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

void check_unit(const Eigen::VectorXd& v) {
  if (std::abs(v.norm() - 1.0) > kUnitNormTolerance) {
    throw DomainError("sphere point is not a unit vector");
  }
}

const Eigen::VectorXd& quantiles_of(const MetricSpace& space,
                                    const MetricObject& object) {
  const auto* q = std::get_if<QuantileObject>(&object);
  require(q != nullptr, "expected a quantile object");
  require(q->values.size() == space.dimension, "quantile grid size mismatch");
  return q->values;
}

const Eigen::MatrixXd& matrix_of(const MetricSpace& space,
                                 const MetricObject& object) {
  const auto* s = std::get_if<SpdObject>(&object);
  require(s != nullptr, "expected an SPD object");
  require(s->matrix.rows() == space.dimension &&
              s->matrix.cols() == space.dimension,
          "matrix order mismatch");
  return s->matrix;
}

const Eigen::VectorXd& coords_of(const MetricSpace& space,
                                 const MetricObject& object) {
  const auto* s = std::get_if<SphereObject>(&object);
  require(s != nullptr, "expected a sphere object");
  require(s->coords.size() == space.dimension, "sphere dimension mismatch");
  return s->coords;
}

Eigen::MatrixXd spectral_map(const Eigen::MatrixXd& m, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd mapped = eig.eigenvalues().unaryExpr(f);
  Eigen::MatrixXd out =
      eig.eigenvectors() * mapped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

void require_spd_spectrum(const Eigen::MatrixXd& m) {
  require(is_symmetric(m), "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError("matrix is not positive definite");
  }
}

}  // namespace

MetricSpace MetricSpace::wasserstein(int grid_size, WassersteinNorm norm) {
  require(grid_size >= 1, "grid size must be positive");
  return {SpaceKind::kWasserstein1D, grid_size, norm};
}

MetricSpace MetricSpace::log_cholesky(int order) {
  require(order >= 1, "matrix order must be positive");
  return {SpaceKind::kSpdLogCholesky, order, WassersteinNorm::kRiemann};
}

MetricSpace MetricSpace::affine_invariant(int order) {
  require(order >= 1, "matrix order must be positive");
  return {SpaceKind::kSpdAffineInvariant, order, WassersteinNorm::kRiemann};
}

MetricSpace MetricSpace::sphere(int ambient_dimension) {
  require(ambient_dimension >= 1, "ambient dimension must be positive");
  return {SpaceKind::kSphereGeodesic, ambient_dimension,
          WassersteinNorm::kRiemann};
}

int MetricSpace::serialized_size() const {
  return is_spd() ? dimension * dimension : dimension;
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::kWasserstein1D:
      return "wasserstein";
    case SpaceKind::kSpdLogCholesky:
      return "log_cholesky";
    case SpaceKind::kSpdAffineInvariant:
      return "affine_invariant";
    case SpaceKind::kSphereGeodesic:
      return "sphere";
  }
  return "unknown";
}

SpaceKind parse_space_kind(std::string_view name) {
  for (SpaceKind k :
       {SpaceKind::kWasserstein1D, SpaceKind::kSpdLogCholesky,
        SpaceKind::kSpdAffineInvariant, SpaceKind::kSphereGeodesic}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown metric space: " + std::string(name));
}

std::string_view to_string(WassersteinNorm norm) {
  return norm == WassersteinNorm::kRiemann ? "riemann" : "euclidean";
}

WassersteinNorm parse_wasserstein_norm(std::string_view name) {
  if (name == "riemann") return WassersteinNorm::kRiemann;
  if (name == "euclidean") return WassersteinNorm::kEuclidean;
  throw DomainError("unknown wasserstein normalization: " + std::string(name));
}

NotPositiveDefinite::NotPositiveDefinite(int pivot, double value)
    : DomainError(describe_pivot(pivot, value)), pivot_(pivot), value_(value) {}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& y) {
  require(is_symmetric(y), "matrix is not symmetric");
  const Eigen::Index m = y.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double pivot = y(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) throw NotPositiveDefinite(static_cast<int>(j), pivot);
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < m; ++i) {
      l(i, j) = (y(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return l;
}

Eigen::MatrixXd matrix_log(const Eigen::MatrixXd& spd) {
  require(is_symmetric(spd), "matrix_log: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spd);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError("matrix_log: matrix is not positive definite");
  }
  Eigen::VectorXd logs = eig.eigenvalues().array().log();
  Eigen::MatrixXd out =
      eig.eigenvectors() * logs.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& symmetric) {
  require(is_symmetric(symmetric), "matrix_exp: matrix is not symmetric");
  return spectral_map(symmetric, [](double v) { return std::exp(v); });
}

Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& spd) {
  require_spd_spectrum(spd);
  return spectral_map(spd, [](double v) { return std::sqrt(v); });
}

Eigen::MatrixXd matrix_inv_sqrt(const Eigen::MatrixXd& spd) {
  require_spd_spectrum(spd);
  return spectral_map(spd, [](double v) { return 1.0 / std::sqrt(v); });
}

Eigen::VectorXd sphere_exp(const Eigen::VectorXd& base,
                           const Eigen::VectorXd& tangent) {
  require(base.size() == tangent.size(), "sphere_exp: dimension mismatch");
  check_unit(base);
  const double theta = tangent.norm();
  if (std::abs(base.dot(tangent)) > 1e-8 * std::max(1.0, theta)) {
    throw DomainError("sphere_exp: tangent vector is not orthogonal to base");
  }
  // sin(t)/t, with the series for tiny t.
  const double sinc =
      theta < 1e-8 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
  Eigen::VectorXd out = std::cos(theta) * base + sinc * tangent;
  return out / out.norm();
}

Eigen::VectorXd sphere_log(const Eigen::VectorXd& base,
                           const Eigen::VectorXd& target) {
  require(base.size() == target.size(), "sphere_log: dimension mismatch");
  check_unit(base);
  check_unit(target);
  const double c = base.dot(target);
  Eigen::VectorXd v = target - c * base;
  const double s = v.norm();
  if (s < 1e-12) {
    if (c < 0.0) {
      throw DomainError("sphere_log: antipodal points have no unique geodesic");
    }
    return Eigen::VectorXd::Zero(base.size());
  }
  const double theta = std::atan2(s, c);
  return (theta / s) * v;
}

Eigen::VectorXd isotonic_project(const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  // Blocks of pooled values: running mean and size.
  std::vector<double> mean;
  std::vector<Eigen::Index> size;
  mean.reserve(n);
  size.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean.push_back(values[i]);
    size.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t k = mean.size() - 1;
      const double total = mean[k - 1] * size[k - 1] + mean[k] * size[k];
      size[k - 1] += size[k];
      mean[k - 1] = total / static_cast<double>(size[k - 1]);
      mean.pop_back();
      size.pop_back();
    }
  }
  Eigen::VectorXd out(n);
  Eigen::Index pos = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    out.segment(pos, size[b]).setConstant(mean[b]);
    pos += size[b];
  }
  return out;
}

int embedding_dimension(const MetricSpace& space) {
  switch (space.kind) {
    case SpaceKind::kWasserstein1D:
      return space.dimension;
    case SpaceKind::kSpdLogCholesky:
      return space.dimension * (space.dimension + 1) / 2;
    default:
      throw DomainError("space has no Euclidean embedding");
  }
}

Eigen::VectorXd embed(const MetricSpace& space, const MetricObject& object) {
  switch (space.kind) {
    case SpaceKind::kWasserstein1D: {
      const Eigen::VectorXd& q = quantiles_of(space, object);
      if (space.normalization == WassersteinNorm::kRiemann) {
        return q / std::sqrt(static_cast<double>(space.dimension));
      }
      return q;
    }
    case SpaceKind::kSpdLogCholesky: {
      const Eigen::MatrixXd l = cholesky_factor(matrix_of(space, object));
      const int m = space.dimension;
      Eigen::VectorXd e(embedding_dimension(space));
      int k = 0;
      for (int i = 1; i < m; ++i) {
        for (int j = 0; j < i; ++j) e[k++] = l(i, j);
      }
      for (int i = 0; i < m; ++i) e[k++] = std::log(l(i, i));
      return e;
    }
    default:
      throw DomainError("space has no Euclidean embedding");
  }
}

MetricObject unembed(const MetricSpace& space, const Eigen::VectorXd& coords) {
  require(coords.size() == embedding_dimension(space),
          "embedding dimension mismatch");
  switch (space.kind) {
    case SpaceKind::kWasserstein1D: {
      Eigen::VectorXd q = coords;
      if (space.normalization == WassersteinNorm::kRiemann) {
        q *= std::sqrt(static_cast<double>(space.dimension));
      }
      return QuantileObject{isotonic_project(q)};
    }
    case SpaceKind::kSpdLogCholesky: {
      const int m = space.dimension;
      Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
      int k = 0;
      for (int i = 1; i < m; ++i) {
        for (int j = 0; j < i; ++j) l(i, j) = coords[k++];
      }
      for (int i = 0; i < m; ++i) l(i, i) = std::exp(coords[k++]);
      Eigen::MatrixXd y = l * l.transpose();
      return SpdObject{0.5 * (y + y.transpose())};
    }
    default:
      throw DomainError("space has no Euclidean embedding");
  }
}

double distance(const MetricSpace& space, const MetricObject& a,
                const MetricObject& b) {
  switch (space.kind) {
    case SpaceKind::kWasserstein1D: {
      const double ss =
          (quantiles_of(space, a) - quantiles_of(space, b)).squaredNorm();
      if (space.normalization == WassersteinNorm::kRiemann) {
        return std::sqrt(ss / space.dimension);
      }
      return std::sqrt(ss);
    }
    case SpaceKind::kSpdLogCholesky:
      return (embed(space, a) - embed(space, b)).norm();
    case SpaceKind::kSpdAffineInvariant: {
      const Eigen::MatrixXd& ma = matrix_of(space, a);
      const Eigen::MatrixXd& mb = matrix_of(space, b);
      require(is_symmetric(ma) && is_symmetric(mb), "matrix is not symmetric");
      // Eigenvalues of a^{-1} b, i.e. of a^{-1/2} b a^{-1/2}.
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
          mb, ma, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
      if (ges.info() != Eigen::Success) {
        throw DomainError("matrix is not positive definite");
      }
      const Eigen::VectorXd& lambda = ges.eigenvalues();
      if (!(lambda.minCoeff() > 0.0)) {
        throw DomainError("matrix is not positive definite");
      }
      return std::sqrt(lambda.array().log().square().sum());
    }
    case SpaceKind::kSphereGeodesic: {
      const Eigen::VectorXd& u = coords_of(space, a);
      const Eigen::VectorXd& v = coords_of(space, b);
      check_unit(u);
      check_unit(v);
      // Equal to arccos(clamp(u.v)) but accurate for nearby points.
      const double c = std::clamp(u.dot(v), -1.0, 1.0);
      const double s = (v - u.dot(v) * u).norm();
      return std::atan2(s, c);
    }
  }
  return 0.0;
}

void validate(const MetricSpace& space, const MetricObject& object) {
  switch (space.kind) {
    case SpaceKind::kWasserstein1D: {
      const Eigen::VectorXd& q = quantiles_of(space, object);
      for (Eigen::Index j = 0; j < q.size(); ++j) {
        if (!std::isfinite(q[j])) throw DomainError("quantile is not finite");
        if (j > 0 && q[j] < q[j - 1]) {
          throw DomainError("quantiles are not nondecreasing at index " +
                            std::to_string(j));
        }
      }
      return;
    }
    case SpaceKind::kSpdLogCholesky:
    case SpaceKind::kSpdAffineInvariant: {
      const Eigen::MatrixXd& m = matrix_of(space, object);
      if (!m.allFinite()) throw DomainError("matrix entry is not finite");
      cholesky_factor(m);
      return;
    }
    case SpaceKind::kSphereGeodesic: {
      const Eigen::VectorXd& c = coords_of(space, object);
      if (!c.allFinite()) throw DomainError("coordinate is not finite");
      check_unit(c);
      return;
    }
  }
}

MetricObject make_object(const MetricSpace& space, std::span<const double> row) {
  if (static_cast<int>(row.size()) != space.serialized_size()) {
    throw DomainError("expected " + std::to_string(space.serialized_size()) +
                      " values, got " + std::to_string(row.size()));
  }
  MetricObject object;
  switch (space.kind) {
    case SpaceKind::kWasserstein1D:
      object = QuantileObject{
          Eigen::Map<const Eigen::VectorXd>(row.data(), space.dimension)};
      break;
    case SpaceKind::kSpdLogCholesky:
    case SpaceKind::kSpdAffineInvariant: {
      using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>;
      Eigen::MatrixXd m = Eigen::Map<const RowMajor>(
          row.data(), space.dimension, space.dimension);
      object = SpdObject{std::move(m)};
      break;
    }
    case SpaceKind::kSphereGeodesic:
      object = SphereObject{
          Eigen::Map<const Eigen::VectorXd>(row.data(), space.dimension)};
      break;
  }
  validate(space, object);
  return object;
}

std::vector<double> serialize(const MetricSpace& space,
                              const MetricObject& object) {
  std::vector<double> out;
  out.reserve(space.serialized_size());
  switch (space.kind) {
    case SpaceKind::kWasserstein1D: {
      const Eigen::VectorXd& q = quantiles_of(space, object);
      out.assign(q.data(), q.data() + q.size());
      break;
    }
    case SpaceKind::kSpdLogCholesky:
    case SpaceKind::kSpdAffineInvariant: {
      const Eigen::MatrixXd& m = matrix_of(space, object);
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
      }
      break;
    }
    case SpaceKind::kSphereGeodesic: {
      const Eigen::VectorXd& c = coords_of(space, object);
      out.assign(c.data(), c.data() + c.size());
      break;
    }
  }
  return out;
}

}  // namespace frechet
