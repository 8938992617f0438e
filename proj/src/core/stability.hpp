#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace mmds {

// Joint probability matrix with prescribed marginals.
struct Coupling {
  Eigen::MatrixXd joint;  // n_x by n_y
  Eigen::VectorXd wx;
  Eigen::VectorXd wy;
};

Coupling product_coupling(const FiniteMmSpace& x, const FiniteMmSpace& y);

// (1/n) mass on pairs (i, perm[i]); requires equal sizes and uniform weights.
Coupling permutation_coupling(const FiniteMmSpace& x, const FiniteMmSpace& y,
                              std::span<const int> perm);

// 1/2 ( sum |d_X(i,i') - d_Y(j,j')|^p c_ij c_i'j' )^{1/p}: the GW functional
// at one coupling, an upper bound for d_GW,p.
double gw_cost(const FiniteMmSpace& x, const FiniteMmSpace& y,
               const Coupling& c, double p);

enum class GwStrategy { enumerate, product };

struct GwUpperBound {
  double cost;
  std::vector<int> perm;  // empty for the product strategy
};

// Upper bound on d_GW,2: minimum over all permutation couplings (n <= 8,
// uniform, equal sizes) or the product-coupling cost.
GwUpperBound gw_upper_bound(const FiniteMmSpace& x, const FiniteMmSpace& y,
                            GwStrategy strategy, int threads = 1);

struct KernelGapCheck {
  double lhs_kernel_gap;  // ||K_X - K_Y||_{L^2(mu (x) mu)}
  double rhs_bound;       // max diam * (3 ||d_X - d_Y||_{L^2} + 2 gw_cost)
  bool holds;
};

KernelGapCheck kernel_gap_bound_check(const FiniteMmSpace& x,
                                      const FiniteMmSpace& y,
                                      const Coupling& c);

struct ProjectionStabilityCheck {
  double projected_gap;  // ||K_X^+ - K_Y^+||_{L^2(mu (x) mu)}
  double raw_gap;        // ||K_X - K_Y||_{L^2(mu (x) mu)}
  bool holds;
};

ProjectionStabilityCheck projection_stability_check(const FiniteMmSpace& x,
                                                    const FiniteMmSpace& y,
                                                    const Coupling& c);

enum class ConsistencyTarget { circle, sphere };

// Column-named table of doubles; rows are experiment records.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// For each size: build the space (polygon grid for the circle target, i.i.d.
// sample for the sphere), eigendecompose in measure mode, pair eigenvalue
// clusters with oracle entries, and compare full-embedding squared distances
// against pi * d_geo.
ResultTable consistency_experiment(ConsistencyTarget target, int d,
                                   std::span<const int> sizes,
                                   std::uint64_t seed, int top_k = 5);

}  // namespace mmds
