#pragma once

#include "core/types.hpp"

namespace mmds {

// Doubly centered -1/2 d^2 kernel. In matrix mode the centering uses uniform
// 1/n weights regardless of the stored measure; measure mode centers against
// mu_X.
struct CenteredKernel {
  Eigen::MatrixXd values;
  Mode mode;
  Eigen::VectorXd weights;  // copied from the source space

  int size() const { return static_cast<int>(values.rows()); }
};

CenteredKernel centered_kernel(const FiniteMmSpace& x, Mode mode);

// K = -1/2 (d^2 - diam_2^2) for spaces whose squared-distance rows all have
// the same weighted sum. Throws NotHomogeneous otherwise; never use it as a
// silent fast path.
CenteredKernel two_point_homogeneous_kernel(const FiniteMmSpace& x);

// ( sum_{i,j} w_i w_j d_ij^p )^{1/p}
double diam_p(const FiniteMmSpace& x, double p);

struct EuclideanCheck {
  bool embeddable;
  double min_eigenvalue;
};

// Schoenberg criterion on the matrix-mode kernel.
EuclideanCheck is_euclidean(const FiniteMmSpace& x, double tol = 1e-9);

}  // namespace mmds
