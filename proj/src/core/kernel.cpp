#include "core/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "core/error.hpp"
#include "core/numerics.hpp"

namespace mmds {

namespace {

// Weighted row sums and grand mean of the entrywise-squared distances,
// accumulated with compensation; the centering identities are tested at
// 1e-10 and plain sums drift past that near n ~ 1e3.
void squared_distance_moments(const Eigen::MatrixXd& dist,
                              const Eigen::VectorXd& w,
                              Eigen::VectorXd& row_means, double& grand_mean) {
  const int n = static_cast<int>(dist.rows());
  row_means.resize(n);
  for (int i = 0; i < n; ++i) {
    NeumaierSum acc;
    for (int j = 0; j < n; ++j) {
      const double d = dist(j, i);  // column scan; symmetric matrix
      acc.add(w(j) * d * d);
    }
    row_means(i) = acc.value();
  }
  NeumaierSum total;
  for (int i = 0; i < n; ++i) total.add(w(i) * row_means(i));
  grand_mean = total.value();
}

}  // namespace

CenteredKernel centered_kernel(const FiniteMmSpace& x, Mode mode) {
  const int n = x.size();
  const Eigen::VectorXd w = mode == Mode::matrix
                                ? Eigen::VectorXd::Constant(n, 1.0 / n)
                                : x.weights;
  Eigen::VectorXd row_means;
  double grand_mean;
  squared_distance_moments(x.dist, w, row_means, grand_mean);

  Eigen::MatrixXd k(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double d = x.dist(i, j);
      k(i, j) = -0.5 * (d * d - row_means(i) - row_means(j) + grand_mean);
    }
  }
  return CenteredKernel{std::move(k), mode, x.weights};
}

CenteredKernel two_point_homogeneous_kernel(const FiniteMmSpace& x) {
  Eigen::VectorXd row_means;
  double grand_mean;
  squared_distance_moments(x.dist, x.weights, row_means, grand_mean);
  const double tol = 1e-10 * std::max(1.0, std::abs(grand_mean));
  for (int i = 0; i < x.size(); ++i) {
    if (std::abs(row_means(i) - grand_mean) > tol) {
      fail(ErrorCode::not_homogeneous,
           "weighted squared-distance row sums differ at index " +
               std::to_string(i) + " (" + std::to_string(row_means(i)) +
               " vs mean " + std::to_string(grand_mean) + ")");
    }
  }
  Eigen::MatrixXd k =
      -0.5 * (x.dist.array().square() - grand_mean).matrix();
  return CenteredKernel{std::move(k), Mode::measure, x.weights};
}

double diam_p(const FiniteMmSpace& x, double p) {
  if (p < 1.0) fail(ErrorCode::bad_argument, "diam_p needs p >= 1");
  const int n = x.size();
  NeumaierSum acc;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      acc.add(x.weights(i) * x.weights(j) * std::pow(x.dist(i, j), p));
    }
  }
  return std::pow(acc.value(), 1.0 / p);
}

EuclideanCheck is_euclidean(const FiniteMmSpace& x, double tol) {
  CenteredKernel k = centered_kernel(x, Mode::matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k.values,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::convergence_failure, "eigensolver failed on kernel");
  }
  const double min_eig = solver.eigenvalues().minCoeff();
  const double max_eig = solver.eigenvalues().maxCoeff();
  return EuclideanCheck{min_eig >= -tol * std::max(1.0, max_eig), min_eig};
}

}  // namespace mmds
