#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mmds {

// Kernel/eigenproblem convention: the classical matrix formulation with
// uniform 1/n centering, or the operator formulation on L^2(mu).
enum class Mode { matrix, measure };

// Finite metric measure space (X, d_X, mu_X): square distance matrix plus
// full-support probability weights.
struct FiniteMmSpace {
  Eigen::MatrixXd dist;
  Eigen::VectorXd weights;
  std::vector<std::string> labels;  // empty when unnamed

  int size() const { return static_cast<int>(weights.size()); }
  double diameter() const { return dist.maxCoeff(); }
};

struct WeightedGraph {
  struct Edge {
    int a;
    int b;
    double length;
  };
  int vertex_count = 0;
  std::vector<Edge> edges;
};

// Euclidean point set with probability weights.
struct PointCloud {
  Eigen::MatrixXd points;  // n x k, row per point
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

}  // namespace mmds
