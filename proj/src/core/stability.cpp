#include "core/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "core/embedding.hpp"
#include "core/error.hpp"
#include "core/kernel.hpp"
#include "core/numerics.hpp"
#include "core/oracle.hpp"
#include "core/space.hpp"
#include "core/spectral.hpp"

namespace mmds {

namespace {

void check_marginals(const Coupling& c) {
  const double tol = 1e-12;
  if ((c.joint.array() < 0.0).any()) {
    fail(ErrorCode::marginal_mismatch, "coupling has negative entries");
  }
  const Eigen::VectorXd rows = c.joint.rowwise().sum();
  const Eigen::VectorXd cols = c.joint.colwise().sum();
  if (((rows - c.wx).cwiseAbs().maxCoeff() > tol) ||
      ((cols - c.wy).cwiseAbs().maxCoeff() > tol)) {
    fail(ErrorCode::marginal_mismatch, "coupling marginals do not match");
  }
}

bool uniform_weights(const Eigen::VectorXd& w) {
  const double ref = 1.0 / static_cast<double>(w.size());
  return (w.array() - ref).abs().maxCoeff() <= 1e-12;
}

// L^2(mu (x) mu) distance between two kernels pulled back to X x Y.
double kernel_l2_gap(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky,
                     const Coupling& c) {
  const int nx = static_cast<int>(kx.rows());
  const int ny = static_cast<int>(ky.rows());
  NeumaierSum acc;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double cij = c.joint(i, j);
      if (cij == 0.0) continue;
      for (int i2 = 0; i2 < nx; ++i2) {
        for (int j2 = 0; j2 < ny; ++j2) {
          const double m = c.joint(i2, j2);
          if (m == 0.0) continue;
          const double gap = kx(i, i2) - ky(j, j2);
          acc.add(cij * m * gap * gap);
        }
      }
    }
  }
  return std::sqrt(std::max(0.0, acc.value()));
}

double permutation_cost_p(const FiniteMmSpace& x, const FiniteMmSpace& y,
                          std::span<const int> perm, double p) {
  const int n = x.size();
  NeumaierSum acc;
  const double w = 1.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int i2 = 0; i2 < n; ++i2) {
      acc.add(w * std::pow(std::abs(x.dist(i, i2) - y.dist(perm[i], perm[i2])), p));
    }
  }
  return acc.value();
}

}  // namespace

Coupling product_coupling(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  Coupling c{x.weights * y.weights.transpose(), x.weights, y.weights};
  check_marginals(c);
  return c;
}

Coupling permutation_coupling(const FiniteMmSpace& x, const FiniteMmSpace& y,
                              std::span<const int> perm) {
  const int n = x.size();
  if (y.size() != n) {
    fail(ErrorCode::marginal_mismatch, "permutation coupling needs equal sizes");
  }
  if (!uniform_weights(x.weights) || !uniform_weights(y.weights)) {
    fail(ErrorCode::marginal_mismatch, "permutation coupling needs uniform weights");
  }
  if (static_cast<int>(perm.size()) != n) {
    fail(ErrorCode::bad_argument, "permutation length mismatch");
  }
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) {
      fail(ErrorCode::bad_argument, "not a permutation");
    }
    seen[v] = 1;
  }
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) joint(i, perm[i]) = 1.0 / n;
  Coupling c{std::move(joint), x.weights, y.weights};
  check_marginals(c);
  return c;
}

double gw_cost(const FiniteMmSpace& x, const FiniteMmSpace& y,
               const Coupling& c, double p) {
  if (p < 1.0) fail(ErrorCode::bad_argument, "gw_cost needs p >= 1");
  if (c.joint.rows() != x.size() || c.joint.cols() != y.size()) {
    fail(ErrorCode::bad_argument, "coupling shape does not match spaces");
  }
  check_marginals(c);
  const int nx = x.size();
  const int ny = y.size();
  NeumaierSum acc;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double cij = c.joint(i, j);
      if (cij == 0.0) continue;
      for (int i2 = 0; i2 < nx; ++i2) {
        for (int j2 = 0; j2 < ny; ++j2) {
          const double m = c.joint(i2, j2);
          if (m == 0.0) continue;
          acc.add(cij * m * std::pow(std::abs(x.dist(i, i2) - y.dist(j, j2)), p));
        }
      }
    }
  }
  return 0.5 * std::pow(acc.value(), 1.0 / p);
}

GwUpperBound gw_upper_bound(const FiniteMmSpace& x, const FiniteMmSpace& y,
                            GwStrategy strategy, int threads) {
  if (strategy == GwStrategy::product) {
    return GwUpperBound{gw_cost(x, y, product_coupling(x, y), 2.0), {}};
  }
  const int n = x.size();
  if (y.size() != n || !uniform_weights(x.weights) || !uniform_weights(y.weights)) {
    fail(ErrorCode::marginal_mismatch,
         "enumeration needs uniform weights and equal sizes");
  }
  if (n > 8) {
    fail(ErrorCode::too_large_to_enumerate,
         "permutation enumeration is capped at n = 8, got " + std::to_string(n));
  }

  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const int nthreads = std::max(1, std::min<int>(threads, 16));
  std::vector<double> best(nthreads, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best_idx(nthreads, 0);
  auto work = [&](int t) {
    for (std::size_t i = t; i < perms.size(); i += nthreads) {
      const double cost = permutation_cost_p(x, y, perms[i], 2.0);
      if (cost < best[t]) {
        best[t] = cost;
        best_idx[t] = i;
      }
    }
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  int arg = 0;
  for (int t = 1; t < nthreads; ++t) {
    // lowest enumeration index wins ties so results do not depend on threads
    if (best[t] < best[arg] ||
        (best[t] == best[arg] && best_idx[t] < best_idx[arg])) {
      arg = t;
    }
  }
  return GwUpperBound{0.5 * std::sqrt(best[arg]), perms[best_idx[arg]]};
}

KernelGapCheck kernel_gap_bound_check(const FiniteMmSpace& x,
                                      const FiniteMmSpace& y,
                                      const Coupling& c) {
  check_marginals(c);
  const Eigen::MatrixXd kx = centered_kernel(x, Mode::measure).values;
  const Eigen::MatrixXd ky = centered_kernel(y, Mode::measure).values;
  const double lhs = kernel_l2_gap(kx, ky, c);

  const double gw = gw_cost(x, y, c, 2.0);
  const double metric_gap = 2.0 * gw;  // ||d_X - d_Y||_{L^2(mu (x) mu)}
  const double diam = std::max(x.diameter(), y.diameter());
  const double rhs = diam * (3.0 * metric_gap + 2.0 * gw);
  return KernelGapCheck{lhs, rhs, lhs <= rhs + 1e-9};
}

ProjectionStabilityCheck projection_stability_check(const FiniteMmSpace& x,
                                                    const FiniteMmSpace& y,
                                                    const Coupling& c) {
  check_marginals(c);
  const CenteredKernel kx = centered_kernel(x, Mode::measure);
  const CenteredKernel ky = centered_kernel(y, Mode::measure);
  const double raw = kernel_l2_gap(kx.values, ky.values, c);
  const double projected =
      kernel_l2_gap(psd_project(kx).values, psd_project(ky).values, c);
  return ProjectionStabilityCheck{projected, raw, projected <= raw + 1e-9};
}

namespace {

struct Cluster {
  double mean;
  int size;
};

// Clusters a sign-sorted run of eigenvalues. With expected sizes given
// (sphere samples, where degeneracy is only approximate) groups are cut at
// the oracle multiplicities; otherwise a gap rule splits clusters when
// consecutive eigenvalues differ by more than 10x the zero tolerance.
std::vector<Cluster> cluster_run(const std::vector<double>& vals,
                                 double zero_tol,
                                 const std::vector<long long>& expected_sizes) {
  std::vector<Cluster> out;
  if (!expected_sizes.empty()) {
    std::size_t pos = 0;
    for (long long want : expected_sizes) {
      if (pos >= vals.size()) break;
      const std::size_t take = std::min<std::size_t>(want, vals.size() - pos);
      double mean = 0.0;
      for (std::size_t i = 0; i < take; ++i) mean += vals[pos + i];
      out.push_back({mean / static_cast<double>(take), static_cast<int>(take)});
      pos += take;
    }
    return out;
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i <= vals.size(); ++i) {
    const bool cut = i == vals.size() ||
                     std::abs(vals[i] - vals[i - 1]) >
                         10.0 * zero_tol * std::max(1.0, std::abs(vals[i - 1]));
    if (cut) {
      double mean = 0.0;
      for (std::size_t j = start; j < i; ++j) mean += vals[j];
      out.push_back({mean / static_cast<double>(i - start),
                     static_cast<int>(i - start)});
      start = i;
    }
  }
  return out;
}

}  // namespace

ResultTable consistency_experiment(ConsistencyTarget target, int d,
                                   std::span<const int> sizes,
                                   std::uint64_t seed, int top_k) {
  if (sizes.empty()) fail(ErrorCode::bad_argument, "empty size list");
  if (top_k < 1) fail(ErrorCode::bad_argument, "top_k must be >= 1");
  if (target == ConsistencyTarget::sphere && d < 3) {
    fail(ErrorCode::bad_argument, "sphere consistency needs d >= 3");
  }

  // Oracle entries for orders 1..top_k.
  std::vector<oracle::AnalyticEigenvalue> oracle_entries;
  if (target == ConsistencyTarget::circle) {
    const auto spec = oracle::circle_spectrum(top_k);
    for (const auto& e : spec.entries) {
      if (e.order >= 1) oracle_entries.push_back(e);
    }
  } else {
    for (int n = 1; n <= top_k; ++n) {
      oracle_entries.push_back(
          oracle::sphere_eigenvalue(n, d, oracle::EvalMethod::quadrature));
    }
  }

  ResultTable table;
  table.columns = {"n",          "k",         "oracle_order",
                   "cluster_mean", "oracle_value", "abs_gap",
                   "cluster_size", "median_sq_rel_err"};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    if (n == 1) {
      // degenerate singleton: spectrum {0}, nothing to match
      table.rows.push_back({1.0, nan, nan, nan, nan, nan, 0.0, nan});
      continue;
    }
    FiniteMmSpace space =
        target == ConsistencyTarget::circle
            ? polygon(n)
            : sphere_sample(d, n, seed + static_cast<std::uint64_t>(si));
    Spectrum s = eigendecompose(centered_kernel(space, Mode::measure));

    std::vector<double> pos, neg;
    for (int i = 0; i < s.size(); ++i) {
      if (s.eigenvalues(i) > s.zero_tol) pos.push_back(s.eigenvalues(i));
      if (s.eigenvalues(i) < -s.zero_tol) neg.push_back(s.eigenvalues(i));
    }
    std::sort(neg.begin(), neg.end());  // most negative first

    std::vector<long long> pos_sizes, neg_sizes;
    if (target == ConsistencyTarget::sphere) {
      for (const auto& e : oracle_entries) {
        (e.value > 0 ? pos_sizes : neg_sizes).push_back(e.multiplicity);
      }
    }
    const auto pos_clusters = cluster_run(pos, s.zero_tol, pos_sizes);
    const auto neg_clusters = cluster_run(neg, s.zero_tol, neg_sizes);

    // median of | ||Phi_i - Phi_j||^2 / (pi d_ij) - 1 | over distinct pairs
    double med = nan;
    if (s.pr() >= 1) {
      Embedding full = embed(s, s.pr());
      std::vector<double> rel;
      rel.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double sq = (full.coords.row(i) - full.coords.row(j)).squaredNorm();
          rel.push_back(std::abs(sq / (M_PI * space.dist(i, j)) - 1.0));
        }
      }
      if (!rel.empty()) {
        std::nth_element(rel.begin(), rel.begin() + rel.size() / 2, rel.end());
        med = rel[rel.size() / 2];
      }
    }

    int pos_rank = 0, neg_rank = 0;
    for (int k = 0; k < static_cast<int>(oracle_entries.size()); ++k) {
      const auto& e = oracle_entries[k];
      const bool positive = e.value > 0.0;
      const auto& clusters = positive ? pos_clusters : neg_clusters;
      int& rank = positive ? pos_rank : neg_rank;
      double mean = nan, gap = nan, csize = 0.0;
      if (rank < static_cast<int>(clusters.size())) {
        mean = clusters[rank].mean;
        csize = clusters[rank].size;
        gap = std::abs(mean - e.value);
      }
      ++rank;
      table.rows.push_back({static_cast<double>(n), static_cast<double>(k + 1),
                            static_cast<double>(e.order), mean, e.value, gap,
                            csize, med});
    }
  }
  return table;
}

}  // namespace mmds
