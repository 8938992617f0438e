#include "core/space.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace mmds {

namespace {

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

void validate_triangle(const Eigen::MatrixXd& dist) {
  const int n = static_cast<int>(dist.rows());
  const double tol = 1e-12 * dist.maxCoeff();
  for (int k = 0; k < n; ++k) {
    const double* colk = dist.col(k).data();
    for (int j = 0; j < n; ++j) {
      const double* colj = dist.col(j).data();
      const double dkj = colk[j];  // = dist(k, j) by symmetry
      int bad = -1;
      for (int i = 0; i < n; ++i) {
        if (colj[i] > colk[i] + dkj + tol) {
          bad = i;
          break;
        }
      }
      if (bad >= 0) {
        fail(ErrorCode::metric_violation,
             "triangle inequality violated: d(" + std::to_string(bad) + "," +
                 std::to_string(j) + ") > d(" + std::to_string(bad) + "," +
                 std::to_string(k) + ") + d(" + std::to_string(k) + "," +
                 std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

FiniteMmSpace make_space(Eigen::MatrixXd dist, Eigen::VectorXd weights,
                         std::vector<std::string> labels) {
  const int n = static_cast<int>(dist.rows());
  if (n < 1 || dist.cols() != n) {
    fail(ErrorCode::bad_argument, "distance matrix must be square and nonempty");
  }
  if (!dist.allFinite()) {
    fail(ErrorCode::metric_violation, "distance matrix has non-finite entries");
  }
  for (int i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) {
      fail(ErrorCode::metric_violation,
           "nonzero diagonal at index " + std::to_string(i));
    }
    for (int j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i)) {
        fail(ErrorCode::metric_violation,
             "asymmetric entries at (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
      }
      if (dist(i, j) <= 0.0) {
        fail(ErrorCode::metric_violation,
             "nonpositive distance between distinct points (" +
                 std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  validate_triangle(dist);

  if (weights.size() == 0) {
    weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  } else if (weights.size() != n) {
    fail(ErrorCode::weight, "weight count does not match point count");
  } else {
    if (!weights.allFinite() || (weights.array() <= 0.0).any()) {
      fail(ErrorCode::weight, "weights must be positive and finite");
    }
    const double total = weights.sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
      fail(ErrorCode::weight, "weights are not normalizable");
    }
    weights /= total;
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n) {
    fail(ErrorCode::bad_argument, "label count does not match point count");
  }
  return FiniteMmSpace{std::move(dist), std::move(weights), std::move(labels)};
}

Eigen::VectorXd load_weights_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open weights file: " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    double v;
    if (!parse_double(line.substr(b, e - b + 1), v)) {
      fail(ErrorCode::parse, "bad weight line: '" + line + "'");
    }
    vals.push_back(v);
  }
  if (static_cast<int>(vals.size()) != n) {
    fail(ErrorCode::weight, "weights file has " + std::to_string(vals.size()) +
                                " entries, expected " + std::to_string(n));
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), n);
}

FiniteMmSpace load_space(const std::string& path, SpaceFormat format,
                         const std::optional<std::string>& weights_path) {
  if (format == SpaceFormat::edge_list) {
    FiniteMmSpace s = shortest_path_metric(load_edge_list(path));
    if (weights_path) {
      return make_space(std::move(s.dist),
                        load_weights_file(*weights_path, s.size()),
                        std::move(s.labels));
    }
    return s;
  }

  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto first_char = line.find_first_not_of(" \t\r");
    if (first_char == std::string::npos || line[first_char] == '#') continue;
    auto fields = split_csv(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        labels = fields;  // header row of labels
        first = false;
        continue;
      }
      fail(ErrorCode::parse, "non-numeric row in matrix CSV: '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::parse, "empty matrix CSV: " + path);
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      fail(ErrorCode::parse, "matrix CSV is not square at row " +
                                 std::to_string(i) + " (" +
                                 std::to_string(rows[i].size()) + " of " +
                                 std::to_string(n) + " columns)");
    }
    for (int j = 0; j < n; ++j) dist(i, j) = rows[i][j];
  }
  Eigen::VectorXd w;
  if (weights_path) w = load_weights_file(*weights_path, n);
  return make_space(std::move(dist), std::move(w), std::move(labels));
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open file: " + path);
  WeightedGraph g;
  std::string line;
  while (std::getline(in, line)) {
    const auto first_char = line.find_first_not_of(" \t\r");
    if (first_char == std::string::npos || line[first_char] == '#') continue;
    std::istringstream ss(line);
    long long a, b;
    double len;
    if (!(ss >> a >> b >> len)) {
      fail(ErrorCode::parse, "bad edge line: '" + line + "'");
    }
    if (a < 0 || b < 0) fail(ErrorCode::parse, "negative vertex index");
    if (len <= 0.0) fail(ErrorCode::parse, "nonpositive edge length");
    g.edges.push_back({static_cast<int>(a), static_cast<int>(b), len});
    g.vertex_count = std::max({g.vertex_count, static_cast<int>(a) + 1,
                               static_cast<int>(b) + 1});
  }
  if (g.vertex_count == 0) fail(ErrorCode::parse, "empty edge list: " + path);
  return g;
}

FiniteMmSpace shortest_path_metric(const WeightedGraph& g) {
  const int n = g.vertex_count;
  if (n < 1) fail(ErrorCode::bad_argument, "graph has no vertices");
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, inf);
  for (int i = 0; i < n; ++i) d(i, i) = 0.0;
  for (const auto& e : g.edges) {
    if (e.a >= n || e.b >= n) fail(ErrorCode::bad_argument, "edge index out of range");
    d(e.a, e.b) = std::min(d(e.a, e.b), e.length);
    d(e.b, e.a) = d(e.a, e.b);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const double dik = d(i, k);
      if (dik == inf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = dik + d(k, j);
        if (via < d(i, j)) d(i, j) = via;
      }
    }
  }
  if (!d.allFinite()) {
    fail(ErrorCode::disconnected_graph, "graph is not connected");
  }
  return make_space(std::move(d));
}

FiniteMmSpace polygon(int n) {
  if (n < 3) fail(ErrorCode::invalid_spec, "polygon needs n >= 3");
  Eigen::MatrixXd d(n, n);
  const double step = 2.0 * M_PI / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int hops = std::min(std::abs(i - j), n - std::abs(i - j));
      d(i, j) = step * hops;
    }
  }
  return make_space(std::move(d));
}

bool is_valid_paley_order(int q) {
  if (q < 5 || q % 4 != 1) return false;
  for (int p = 2; static_cast<long long>(p) * p <= q; ++p) {
    if (q % p == 0) return false;
  }
  return true;
}

FiniteMmSpace paley(int q) {
  if (!is_valid_paley_order(q)) {
    fail(ErrorCode::invalid_spec,
         "paley order must be a prime congruent to 1 mod 4, got " +
             std::to_string(q));
  }
  std::vector<char> residue(q, 0);
  for (int x = 1; x < q; ++x) {
    residue[static_cast<int>((static_cast<long long>(x) * x) % q)] = 1;
  }
  WeightedGraph g;
  g.vertex_count = q;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      if (residue[(j - i) % q]) g.edges.push_back({i, j, 1.0});
    }
  }
  return shortest_path_metric(g);
}

FiniteMmSpace sphere_sample(int d, int n, std::uint64_t seed) {
  if (d < 2) fail(ErrorCode::invalid_spec, "sphere_sample needs d >= 2");
  if (n < 1) fail(ErrorCode::invalid_spec, "sphere_sample needs n >= 1");
  Rng rng(seed);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) {
    double norm = 0.0;
    do {
      for (int c = 0; c < d; ++c) pts(i, c) = rng.normal();
      norm = pts.row(i).norm();
    } while (norm == 0.0);
    pts.row(i) /= norm;
  }
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double ip = std::clamp(pts.row(i).dot(pts.row(j)), -1.0, 1.0);
      dist(i, j) = dist(j, i) = std::acos(ip);
    }
  }
  return make_space(std::move(dist));
}

FiniteMmSpace torus_grid(int n_factors, int n_per_factor) {
  if (n_factors < 1) fail(ErrorCode::invalid_spec, "torus_grid needs N >= 1");
  FiniteMmSpace factor = polygon(n_per_factor);
  FiniteMmSpace out = factor;
  for (int i = 1; i < n_factors; ++i) out = product_space(out, factor);
  return out;
}

FiniteMmSpace glued_paley_truncation(const std::vector<int>& qs) {
  if (qs.empty()) fail(ErrorCode::invalid_spec, "empty Paley block list");
  std::vector<FiniteMmSpace> blocks;
  int total = 0;
  for (int q : qs) {
    blocks.push_back(paley(q));
    total += q;
  }
  // Blocks keep their shortest-path metric; distinct blocks sit at mutual
  // distance 1. Vertex mass is proportional to q^{-3/2}, renormalized over
  // the truncation.
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(total, total, 1.0);
  Eigen::VectorXd w(total);
  int off = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int q = qs[b];
    dist.block(off, off, q, q) = blocks[b].dist;
    w.segment(off, q).setConstant(std::pow(static_cast<double>(q), -1.5));
    off += q;
  }
  return make_space(std::move(dist), std::move(w));
}

FiniteMmSpace random_metric_space(int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_spec, "random_metric_space needs n >= 1");
  Rng rng(seed);
  // Off-diagonal entries uniform in [1, 2]: any such matrix satisfies the
  // triangle inequality.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = rng.uniform(1.0, 2.0);
    }
  }
  return make_space(std::move(d));
}

PointCloud ellipse_cloud(double a, double b, int n, std::uint64_t seed) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::invalid_spec, "ellipse needs a, b > 0");
  if (n < 1) fail(ErrorCode::invalid_spec, "ellipse_cloud needs n >= 1");
  Rng rng(seed);
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    double x, y;
    do {
      x = rng.uniform(-a, a);
      y = rng.uniform(-b, b);
    } while ((x / a) * (x / a) + (y / b) * (y / b) > 1.0);
    pts(i, 0) = x;
    pts(i, 1) = y;
  }
  return PointCloud{std::move(pts),
                    Eigen::VectorXd::Constant(n, 1.0 / n)};
}

PointCloud load_cloud_csv(const std::string& path,
                          const std::optional<std::string>& weights_path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto first_char = line.find_first_not_of(" \t\r");
    if (first_char == std::string::npos || line[first_char] == '#') continue;
    auto fields = split_csv(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header row
      }
      fail(ErrorCode::parse, "non-numeric row in points CSV: '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::parse, "empty points CSV: " + path);
  const int n = static_cast<int>(rows.size());
  const int k = static_cast<int>(rows[0].size());
  Eigen::MatrixXd pts(n, k);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != k) {
      fail(ErrorCode::parse, "ragged points CSV at row " + std::to_string(i));
    }
    for (int j = 0; j < k; ++j) pts(i, j) = rows[i][j];
  }
  if (!pts.allFinite()) fail(ErrorCode::parse, "non-finite point coordinates");
  Eigen::VectorXd w;
  if (weights_path) {
    w = load_weights_file(*weights_path, n);
    if ((w.array() <= 0.0).any()) {
      fail(ErrorCode::weight, "weights must be positive");
    }
    w /= w.sum();
  } else {
    w = Eigen::VectorXd::Constant(n, 1.0 / n);
  }
  return PointCloud{std::move(pts), std::move(w)};
}

FiniteMmSpace space_from_cloud(const PointCloud& cloud) {
  const int n = cloud.size();
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = (cloud.points.row(i) - cloud.points.row(j)).norm();
    }
  }
  return make_space(std::move(dist), cloud.weights);
}

FiniteMmSpace product_space(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  const int nx = x.size();
  const int ny = y.size();
  const int n = nx * ny;
  Eigen::MatrixXd dist(n, n);
  Eigen::VectorXd w(n);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      w(i * ny + j) = x.weights(i) * y.weights(j);
    }
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int r = i * ny + j;
      for (int i2 = 0; i2 < nx; ++i2) {
        const double dx = x.dist(i, i2);
        for (int j2 = 0; j2 < ny; ++j2) {
          dist(r, i2 * ny + j2) = std::hypot(dx, y.dist(j, j2));
        }
      }
    }
  }
  return make_space(std::move(dist), std::move(w));
}

}  // namespace mmds
