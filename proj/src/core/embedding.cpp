#include "core/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/kernel.hpp"
#include "core/numerics.hpp"

namespace mmds {

Embedding embed(const Spectrum& s, int k) {
  const int pr = s.pr();
  if (k < 1 || k > pr) {
    fail(ErrorCode::dimension_too_large,
         "target dimension " + std::to_string(k) + " outside [1, pr = " +
             std::to_string(pr) + "]");
  }
  Eigen::MatrixXd coords(s.size(), k);
  for (int m = 0; m < k; ++m) {
    coords.col(m) = std::sqrt(s.eigenvalues(m)) * s.eigenfunctions.col(m);
  }
  return Embedding{std::move(coords), s.mode, k};
}

Eigen::MatrixXd embedded_distances(const Embedding& e) {
  const int n = e.size();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (e.coords.row(i) - e.coords.row(j)).norm();
    }
  }
  return d;
}

double distortion(const FiniteMmSpace& x, const Embedding& e) {
  const int n = x.size();
  if (e.size() != n) {
    fail(ErrorCode::bad_argument, "embedding does not match space size");
  }
  NeumaierSum acc;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double sq = (e.coords.row(i) - e.coords.row(j)).squaredNorm();
      const double d = x.dist(i, j);
      acc.add(x.weights(i) * x.weights(j) * std::abs(sq - d * d));
    }
  }
  return std::sqrt(acc.value());
}

LinfCheck linf_distortion_bound_check(const FiniteMmSpace& x,
                                      const Embedding& e) {
  const int n = x.size();
  if (e.size() != n) {
    fail(ErrorCode::bad_argument, "embedding does not match space size");
  }
  if (e.source_mode != Mode::matrix) {
    fail(ErrorCode::mode_mismatch, "bound check requires a matrix-mode embedding");
  }
  const double wref = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    if (std::abs(x.weights(i) - wref) > 1e-12) {
      fail(ErrorCode::mode_mismatch, "bound check requires uniform weights");
    }
  }
  Spectrum s = eigendecompose(centered_kernel(x, Mode::matrix));
  if (e.k != s.pr()) {
    fail(ErrorCode::mode_mismatch, "bound check requires the full embedding k = pr");
  }
  double max_excess = n > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double len = (e.coords.row(i) - e.coords.row(j)).norm();
      max_excess = std::max(max_excess, len - x.dist(i, j));
    }
  }
  const double bound = std::sqrt(2.0 * negative_trace(s));
  const bool holds = max_excess >= -1e-9 && max_excess <= bound + 1e-9;
  return LinfCheck{max_excess, bound, holds};
}

namespace {

Eigen::MatrixXd weighted_covariance(const PointCloud& cloud) {
  const int k = cloud.dim();
  const Eigen::RowVectorXd mean = cloud.weights.transpose() * cloud.points;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < cloud.size(); ++i) {
    const Eigen::RowVectorXd c = cloud.points.row(i) - mean;
    cov.noalias() += cloud.weights(i) * c.transpose() * c;
  }
  return cov;
}

}  // namespace

double thickness(const PointCloud& cloud) {
  if (cloud.size() < 1) fail(ErrorCode::bad_argument, "empty cloud");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      weighted_covariance(cloud), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().minCoeff()));
}

Eigen::VectorXd covariance_eigenvalues(const PointCloud& cloud) {
  if (cloud.size() < 1) fail(ErrorCode::bad_argument, "empty cloud");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      weighted_covariance(cloud), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

}  // namespace mmds
