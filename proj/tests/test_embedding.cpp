#include <cmath>

#include "core/embedding.hpp"
#include "core/error.hpp"
#include "core/kernel.hpp"
#include "core/rng.hpp"
#include "core/space.hpp"
#include "core/spectral.hpp"
#include "doctest.h"

using namespace mmds;

namespace {

FiniteMmSpace four_point() {
  Eigen::MatrixXd d(4, 4);
  d << 0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0;
  return make_space(d);
}

FiniteMmSpace unit_square() {
  Eigen::MatrixXd d(4, 4);
  const double r2 = std::sqrt(2.0);
  d << 0, 1, r2, 1, 1, 0, 1, r2, r2, 1, 0, 1, 1, r2, 1, 0;
  return make_space(d);
}

}  // namespace

TEST_CASE("four-point embedding reproduces the figure distances") {
  const auto space = four_point();
  const auto s = eigendecompose(centered_kernel(space, Mode::matrix));
  const auto e = embed(s, 2);
  const auto dist = embedded_distances(e);
  const double leg = 2.0 / std::sqrt(3.0);
  for (int i = 1; i < 4; ++i) {
    CHECK(dist(0, i) == doctest::Approx(leg).epsilon(1e-9));
    for (int j = i + 1; j < 4; ++j) {
      CHECK(dist(i, j) == doctest::Approx(2.0).epsilon(1e-9));
    }
  }
  CHECK(dist.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Euclidean spaces embed exactly") {
  const auto space = unit_square();
  const auto s = eigendecompose(centered_kernel(space, Mode::matrix));
  const auto e = embed(s, s.pr());
  const auto dist = embedded_distances(e);
  CHECK((dist - space.dist).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(distortion(space, e) <= 1e-7);
}

TEST_CASE("matrix and measure embeddings agree under uniform weights") {
  const auto space = polygon(8);
  const auto em = embed(eigendecompose(centered_kernel(space, Mode::matrix)), 3);
  const auto eo = embed(eigendecompose(centered_kernel(space, Mode::measure)), 3);
  CHECK((embedded_distances(em) - embedded_distances(eo)).cwiseAbs().maxCoeff() <=
        1e-9);
}

TEST_CASE("embedding invariants") {
  Rng rng(2);
  auto base = random_metric_space(12, 40);
  Eigen::VectorXd w(12);
  for (int i = 0; i < 12; ++i) w(i) = rng.uniform(0.5, 1.5);
  const auto space = make_space(base.dist, w);
  const auto s = eigendecompose(centered_kernel(space, Mode::measure));
  const auto e = embed(s, s.pr());

  SUBCASE("weighted centroid at the origin") {
    const Eigen::RowVectorXd centroid = space.weights.transpose() * e.coords;
    CHECK(centroid.cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("Gram recovery against the projected kernel") {
    const auto p = psd_project(s);
    CHECK(((e.coords * e.coords.transpose()) - p.values).cwiseAbs().maxCoeff() <=
          1e-9);
  }
  SUBCASE("monotone nesting of truncations") {
    const auto e1 = embed(s, 1);
    const auto d1 = embedded_distances(e1);
    const auto dfull = embedded_distances(e);
    CHECK((d1 - dfull).maxCoeff() <= 1e-12);
  }
  SUBCASE("non-contraction at k = pr") {
    const auto dist = embedded_distances(e);
    CHECK((dist - space.dist).minCoeff() >= -1e-9);
  }
}

TEST_CASE("dimension bounds") {
  const auto s = eigendecompose(centered_kernel(four_point(), Mode::matrix));
  CHECK_THROWS_AS(embed(s, 3), Error);  // pr = 2
  CHECK_THROWS_AS(embed(s, 0), Error);

  Eigen::MatrixXd one(1, 1);
  one << 0.0;
  const auto singleton = eigendecompose(centered_kernel(make_space(one), Mode::measure));
  CHECK_THROWS_AS(embed(singleton, 1), Error);  // pr = 0
}

TEST_CASE("distortion equals sqrt(2 Tr_neg) at full rank") {
  for (int m : {1, 2}) {
    const auto space = polygon(4 * m + 2);
    const auto s = eigendecompose(centered_kernel(space, Mode::measure));
    const auto e = embed(s, s.pr());
    CHECK(distortion(space, e) ==
          doctest::Approx(std::sqrt(2.0 * negative_trace(s))).epsilon(1e-9));
  }
}

TEST_CASE("ellipse cloud: dis_1 approaches b/sqrt(2)") {
  const auto cloud = ellipse_cloud(2.0, 1.0, 1500, 12);
  const auto space = space_from_cloud(cloud);
  const auto s = eigendecompose(centered_kernel(space, Mode::measure));
  const auto e = embed(s, 1);
  CHECK(distortion(space, e) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.06));
}

TEST_CASE("sup-norm distortion bound") {
  SUBCASE("Euclidean input has zero excess") {
    const auto space = unit_square();
    const auto s = eigendecompose(centered_kernel(space, Mode::matrix));
    const auto check = linf_distortion_bound_check(space, embed(s, s.pr()));
    CHECK(std::abs(check.max_excess) <= 1e-9);
    CHECK(check.holds);
  }
  SUBCASE("hexagon bound value") {
    const auto space = polygon(6);
    const auto s = eigendecompose(centered_kernel(space, Mode::matrix));
    const auto check = linf_distortion_bound_check(space, embed(s, s.pr()));
    CHECK(check.holds);
    CHECK(check.bound ==
          doctest::Approx(std::sqrt(2.0 * 4.0 * M_PI * M_PI / 9.0)).epsilon(1e-11));
  }
  SUBCASE("paley(13) satisfies the bound") {
    const auto space = paley(13);
    const auto s = eigendecompose(centered_kernel(space, Mode::matrix));
    CHECK(linf_distortion_bound_check(space, embed(s, s.pr())).holds);
  }
  SUBCASE("mode mismatch is rejected") {
    const auto space = polygon(6);
    const auto s = eigendecompose(centered_kernel(space, Mode::measure));
    CHECK_THROWS_AS(linf_distortion_bound_check(space, embed(s, s.pr())), Error);
  }
}

TEST_CASE("thickness") {
  SUBCASE("ellipse thickness approaches b/2") {
    const auto cloud = ellipse_cloud(2.0, 1.0, 3000, 8);
    CHECK(thickness(cloud) == doctest::Approx(0.5).epsilon(0.05));
  }
  SUBCASE("degenerate direction gives zero") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 1, 0, 2, 0;
    const PointCloud cloud{pts, Eigen::VectorXd::Constant(3, 1.0 / 3)};
    CHECK(thickness(cloud) == 0.0);
  }
  SUBCASE("k-th kernel eigenvalue is bounded by thickness squared") {
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 10 + trial;
      Eigen::MatrixXd pts(n, 2);
      for (int i = 0; i < n; ++i) {
        pts(i, 0) = rng.uniform(-1, 1);
        pts(i, 1) = rng.uniform(-0.3, 0.3);
      }
      const PointCloud cloud{pts, Eigen::VectorXd::Constant(n, 1.0 / n)};
      const auto s =
          eigendecompose(centered_kernel(space_from_cloud(cloud), Mode::measure));
      const double th = thickness(cloud);
      CHECK(s.eigenvalues(1) <= th * th + 1e-9);  // k = dim = 2
    }
  }
}

TEST_CASE("kernel spectrum equals the covariance spectrum for clouds") {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 12 + 3 * trial;
    const int dim = 2 + trial % 3;
    Eigen::MatrixXd pts(n, dim);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      w(i) = rng.uniform(0.5, 2.0);
      for (int j = 0; j < dim; ++j) pts(i, j) = rng.normal();
    }
    w /= w.sum();
    const PointCloud cloud{pts, w};
    const auto cov = covariance_eigenvalues(cloud);
    const auto s =
        eigendecompose(centered_kernel(space_from_cloud(cloud), Mode::measure));
    for (int j = 0; j < dim; ++j) {
      CHECK(s.eigenvalues(j) == doctest::Approx(cov(j)).epsilon(1e-9));
    }
    for (int j = dim; j < n; ++j) {
      CHECK(std::abs(s.eigenvalues(j)) <= 1e-9);
    }
  }
}
