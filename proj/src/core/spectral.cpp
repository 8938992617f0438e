#include "core/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "core/error.hpp"

namespace mmds {

namespace {

// Deterministic sign convention: the entry of largest magnitude (lowest index
// on exact ties) is made positive.
void fix_signs(Eigen::MatrixXd& funcs) {
  for (int m = 0; m < funcs.cols(); ++m) {
    int arg = 0;
    double best = std::abs(funcs(0, m));
    for (int i = 1; i < funcs.rows(); ++i) {
      const double a = std::abs(funcs(i, m));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (funcs(arg, m) < 0.0) funcs.col(m) = -funcs.col(m);
  }
}

}  // namespace

int Spectrum::pr() const {
  int c = 0;
  for (int i = 0; i < size(); ++i) c += eigenvalues(i) > zero_tol ? 1 : 0;
  return c;
}

int Spectrum::nr() const {
  int c = 0;
  for (int i = 0; i < size(); ++i) c += eigenvalues(i) < -zero_tol ? 1 : 0;
  return c;
}

Spectrum eigendecompose(const CenteredKernel& k, double zero_tol) {
  const int n = k.size();
  Eigen::MatrixXd sym;
  if (k.mode == Mode::measure) {
    const Eigen::VectorXd root = k.weights.array().sqrt();
    sym = root.asDiagonal() * k.values * root.asDiagonal();
  } else {
    sym = k.values;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::convergence_failure,
         "eigensolver did not converge (n=" + std::to_string(n) +
             ", |K|_max=" + std::to_string(k.values.cwiseAbs().maxCoeff()) +
             ")");
  }

  Spectrum s;
  s.mode = k.mode;
  s.weights = k.weights;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenfunctions = solver.eigenvectors().rowwise().reverse();
  if (k.mode == Mode::measure) {
    const Eigen::VectorXd invroot = k.weights.array().rsqrt();
    s.eigenfunctions = invroot.asDiagonal() * s.eigenfunctions;
  }
  fix_signs(s.eigenfunctions);
  const double lam_max = s.eigenvalues.size() > 0 ? s.eigenvalues(0) : 0.0;
  s.zero_tol = zero_tol >= 0.0 ? zero_tol : 1e-9 * std::max(1.0, lam_max);
  return s;
}

PsdKernel psd_project(const Spectrum& s, std::optional<int> rank_bound) {
  const int pr = s.pr();
  if (rank_bound && (*rank_bound < 0 || *rank_bound > pr)) {
    fail(ErrorCode::rank_too_large,
         "rank bound " + std::to_string(*rank_bound) + " exceeds pr = " +
             std::to_string(pr));
  }
  const int m = rank_bound ? std::min(*rank_bound, pr) : pr;
  const int n = s.size();
  Eigen::MatrixXd vals = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < m; ++c) {
    vals.noalias() +=
        s.eigenvalues(c) * s.eigenfunctions.col(c) * s.eigenfunctions.col(c).transpose();
  }
  return PsdKernel{std::move(vals), rank_bound, s.mode, s.weights};
}

PsdKernel psd_project(const CenteredKernel& k, std::optional<int> rank_bound) {
  return psd_project(eigendecompose(k), rank_bound);
}

double trace_norm(const Spectrum& s) {
  return s.eigenvalues.cwiseAbs().sum();
}

double negative_trace(const Spectrum& s) {
  double acc = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    if (s.eigenvalues(i) < -s.zero_tol) acc -= s.eigenvalues(i);
  }
  return acc;
}

}  // namespace mmds
