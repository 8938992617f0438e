#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace mmds {

// Validates the metric-measure axioms (zero diagonal, symmetry, positivity
// off the diagonal, triangle inequality to 1e-12*diam, positive weights
// summing to 1) and returns the space. Weights may be empty (uniform) or
// unnormalized (they are scaled to sum 1).
FiniteMmSpace make_space(Eigen::MatrixXd dist, Eigen::VectorXd weights = {},
                         std::vector<std::string> labels = {});

enum class SpaceFormat { csv_matrix, edge_list };

FiniteMmSpace load_space(const std::string& path, SpaceFormat format,
                         const std::optional<std::string>& weights_path = {});

WeightedGraph load_edge_list(const std::string& path);
Eigen::VectorXd load_weights_file(const std::string& path, int n);

// All-pairs shortest paths (Floyd-Warshall), uniform weights.
FiniteMmSpace shortest_path_metric(const WeightedGraph& g);

// Generators. All are pure functions of (parameters, seed).
FiniteMmSpace polygon(int n);
FiniteMmSpace paley(int q);
FiniteMmSpace sphere_sample(int d, int n, std::uint64_t seed);
FiniteMmSpace torus_grid(int n_factors, int n_per_factor);
FiniteMmSpace glued_paley_truncation(const std::vector<int>& qs);
FiniteMmSpace random_metric_space(int n, std::uint64_t seed);

PointCloud ellipse_cloud(double a, double b, int n, std::uint64_t seed);
PointCloud load_cloud_csv(const std::string& path,
                          const std::optional<std::string>& weights_path = {});
FiniteMmSpace space_from_cloud(const PointCloud& cloud);

// l^2-product metric with product measure.
FiniteMmSpace product_space(const FiniteMmSpace& x, const FiniteMmSpace& y);

bool is_valid_paley_order(int q);

}  // namespace mmds
