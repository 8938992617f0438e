#pragma once

#include <optional>

#include "core/kernel.hpp"
#include "core/types.hpp"

namespace mmds {

// Eigendecomposition of a centered kernel. Measure mode solves the operator
// eigenproblem phi -> K D phi via the symmetrized form D^{1/2} K D^{1/2};
// eigenfunctions are L^2(mu)-orthonormal. Matrix mode is the plain symmetric
// eigendecomposition with Euclidean-orthonormal eigenvectors.
struct Spectrum {
  Eigen::VectorXd eigenvalues;     // descending
  Eigen::MatrixXd eigenfunctions;  // column m is phi_m
  Mode mode;
  Eigen::VectorXd weights;
  double zero_tol;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int pr() const;  // eigenvalues above +zero_tol
  int nr() const;  // eigenvalues below -zero_tol
};

// zero_tol < 0 selects the default 1e-9 * max(1, lambda_max).
Spectrum eigendecompose(const CenteredKernel& k, double zero_tol = -1.0);

struct PsdKernel {
  Eigen::MatrixXd values;
  std::optional<int> rank_bound;
  Mode mode;
  Eigen::VectorXd weights;
};

// Nearest-PSD projection by clipping negative eigenvalues, optionally
// truncated to the top rank_bound positive ones; rank_bound must not exceed
// pr(K).
PsdKernel psd_project(const CenteredKernel& k,
                      std::optional<int> rank_bound = {});
PsdKernel psd_project(const Spectrum& s, std::optional<int> rank_bound = {});

double trace_norm(const Spectrum& s);
double negative_trace(const Spectrum& s);

}  // namespace mmds
