#pragma once

#include "core/spectral.hpp"
#include "core/types.hpp"

namespace mmds {

struct Embedding {
  Eigen::MatrixXd coords;  // row i = Phi(x_i)
  Mode source_mode;
  int k;

  int size() const { return static_cast<int>(coords.rows()); }
};

// coords[i][m] = sqrt(lambda_m) phi_m(i) for the top k positive eigenpairs.
Embedding embed(const Spectrum& s, int k);

Eigen::MatrixXd embedded_distances(const Embedding& e);

// ( sum_{i,j} w_i w_j | |Phi_i - Phi_j|^2 - d_ij^2 | )^{1/2}
double distortion(const FiniteMmSpace& x, const Embedding& e);

struct LinfCheck {
  double max_excess;
  double bound;
  bool holds;
};

// Checks 0 <= |Phi_i - Phi_j| - d_ij <= sqrt(2 Tr_neg(K)) for the full
// matrix-mode embedding of a uniform-weight space.
LinfCheck linf_distortion_bound_check(const FiniteMmSpace& x,
                                      const Embedding& e);

// Square root of the smallest eigenvalue of the weighted covariance of the
// centered points: the minimal projected standard deviation.
double thickness(const PointCloud& cloud);

// Weighted covariance eigenvalues, descending.
Eigen::VectorXd covariance_eigenvalues(const PointCloud& cloud);

}  // namespace mmds
