#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "core/embedding.hpp"
#include "core/error.hpp"
#include "core/kernel.hpp"
#include "core/rng.hpp"
#include "core/space.hpp"
#include "core/spectral.hpp"
#include "core/stability.hpp"
#include "doctest.h"

using namespace mmds;

namespace {

FiniteMmSpace two_point(double gap) {
  Eigen::MatrixXd d(2, 2);
  d << 0, gap, gap, 0;
  return make_space(d);
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

TEST_CASE("coupling construction") {
  SUBCASE("product of uniform 3-point spaces") {
    const auto x = polygon(3);
    const auto c = product_coupling(x, x);
    CHECK((c.joint.array() - 1.0 / 9).abs().maxCoeff() <= 1e-15);
  }
  SUBCASE("identity permutation puts 1/n on the diagonal") {
    const auto x = polygon(4);
    const auto c = permutation_coupling(x, x, identity_perm(4));
    CHECK(c.joint.diagonal().minCoeff() == 0.25);
    CHECK(c.joint.sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("marginals hold for random weights") {
    Rng rng(3);
    auto base = random_metric_space(5, 8);
    Eigen::VectorXd w(5);
    for (int i = 0; i < 5; ++i) w(i) = rng.uniform(0.1, 1.0);
    const auto x = make_space(base.dist, w);
    const auto y = random_metric_space(7, 9);
    const auto c = product_coupling(x, y);
    CHECK((c.joint.rowwise().sum() - x.weights).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((c.joint.colwise().sum().transpose() - y.weights).cwiseAbs().maxCoeff() <=
          1e-12);
  }
  SUBCASE("permutation couplings need uniform equal-size marginals") {
    const auto x = polygon(4);
    const auto y = polygon(5);
    CHECK_THROWS_AS(permutation_coupling(x, y, identity_perm(4)), Error);
    Eigen::VectorXd w(4);
    w << 1, 2, 3, 4;
    const auto wx = make_space(polygon(4).dist, w);
    CHECK_THROWS_AS(permutation_coupling(wx, wx, identity_perm(4)), Error);
  }
}

TEST_CASE("gw cost basics") {
  const auto hex = polygon(6);
  SUBCASE("identity coupling on identical spaces costs zero") {
    const auto c = permutation_coupling(hex, hex, identity_perm(6));
    CHECK(gw_cost(hex, hex, c, 2.0) == 0.0);
  }
  SUBCASE("cost against the one-point space is half the p-diameter") {
    Eigen::MatrixXd one(1, 1);
    one << 0.0;
    const auto star = make_space(one);
    const auto c = product_coupling(hex, star);
    CHECK(gw_cost(hex, star, c, 2.0) ==
          doctest::Approx(0.5 * diam_p(hex, 2.0)).epsilon(1e-12));
    CHECK(gw_cost(hex, star, c, 1.0) ==
          doctest::Approx(0.5 * diam_p(hex, 1.0)).epsilon(1e-12));
  }
  SUBCASE("two-point spaces against brute force") {
    const double a = 0.8, b = 1.3;
    const auto x = two_point(a);
    const auto y = two_point(b);
    // both permutations give the same coupling cost here; enumerate directly
    double best = 1e300;
    for (const auto& perm : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
      double acc = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int i2 = 0; i2 < 2; ++i2) {
          const double diff = x.dist(i, i2) - y.dist(perm[i], perm[i2]);
          acc += 0.25 * diff * diff;
        }
      }
      best = std::min(best, 0.5 * std::sqrt(acc));
    }
    const auto res = gw_upper_bound(x, y, GwStrategy::enumerate);
    CHECK(res.cost == doctest::Approx(best).epsilon(1e-13));
    CHECK(best == doctest::Approx(0.25 * std::abs(a - b) * std::sqrt(2.0))
                      .epsilon(1e-13));
  }
  SUBCASE("swap symmetry") {
    const auto x = random_metric_space(4, 1);
    const auto y = random_metric_space(5, 2);
    const auto c = product_coupling(x, y);
    Coupling ct{c.joint.transpose(), y.weights, x.weights};
    CHECK(gw_cost(x, y, c, 2.0) ==
          doctest::Approx(gw_cost(y, x, ct, 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("gw upper bounds") {
  SUBCASE("isometric relabelings cost zero") {
    const auto x = random_metric_space(5, 77);
    Eigen::MatrixXd d = x.dist;
    const std::vector<int> relabel = {3, 0, 4, 1, 2};
    Eigen::MatrixXd dy(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) dy(i, j) = d(relabel[i], relabel[j]);
    }
    const auto y = make_space(dy);
    const auto res = gw_upper_bound(x, y, GwStrategy::enumerate);
    CHECK(res.cost <= 1e-12);
  }
  SUBCASE("hexagon against its 1.1-scaled copy") {
    const auto hex = polygon(6);
    const auto scaled = make_space(1.1 * hex.dist);
    const auto res = gw_upper_bound(hex, scaled, GwStrategy::enumerate);
    CHECK(res.cost ==
          doctest::Approx(0.05 * diam_p(hex, 2.0)).epsilon(1e-12));
  }
  SUBCASE("enumeration never loses to the product coupling") {
    const auto x = random_metric_space(6, 5);
    const auto y = random_metric_space(6, 6);
    const auto en = gw_upper_bound(x, y, GwStrategy::enumerate);
    const auto pr = gw_upper_bound(x, y, GwStrategy::product);
    CHECK(en.cost <= pr.cost + 1e-12);
  }
  SUBCASE("thread count does not change the result") {
    const auto x = random_metric_space(6, 15);
    const auto y = random_metric_space(6, 16);
    const auto one = gw_upper_bound(x, y, GwStrategy::enumerate, 1);
    const auto four = gw_upper_bound(x, y, GwStrategy::enumerate, 4);
    CHECK(one.cost == four.cost);
    CHECK(one.perm == four.perm);
  }
  SUBCASE("cap on enumeration size") {
    const auto x = random_metric_space(9, 1);
    const auto y = random_metric_space(9, 2);
    CHECK_THROWS_AS(gw_upper_bound(x, y, GwStrategy::enumerate), Error);
  }
}

TEST_CASE("kernel gap bound") {
  SUBCASE("identical spaces, identity coupling") {
    const auto hex = polygon(6);
    const auto c = permutation_coupling(hex, hex, identity_perm(6));
    const auto res = kernel_gap_bound_check(hex, hex, c);
    CHECK(res.lhs_kernel_gap <= 1e-12);
    CHECK(res.holds);
  }
  SUBCASE("hexagon against a rescaled pentagon") {
    const auto hex = polygon(6);
    const auto pent = paley(5);
    const auto scaled = make_space(0.9 * pent.dist);
    const auto res = kernel_gap_bound_check(hex, scaled, product_coupling(hex, scaled));
    CHECK(res.holds);
    CHECK(res.lhs_kernel_gap > 0.0);
  }
  SUBCASE("randomized runs never violate the bound") {
    for (int trial = 0; trial < 30; ++trial) {
      const auto x = random_metric_space(6, 300 + 2 * trial);
      const auto y = random_metric_space(6, 301 + 2 * trial);
      CHECK(kernel_gap_bound_check(x, y, product_coupling(x, y)).holds);
    }
  }
}

TEST_CASE("projection stability") {
  SUBCASE("identical inputs give zero gaps") {
    const auto hex = polygon(6);
    const auto res = projection_stability_check(
        hex, hex, permutation_coupling(hex, hex, identity_perm(6)));
    CHECK(res.projected_gap <= 1e-12);
    CHECK(res.raw_gap <= 1e-12);
    CHECK(res.holds);
  }
  SUBCASE("identity coupling reproduces the finite stability inequality") {
    const int n = 7;
    const auto x1 = random_metric_space(n, 11);
    const auto x2 = random_metric_space(n, 12);
    const auto res = projection_stability_check(
        x1, x2, permutation_coupling(x1, x2, identity_perm(n)));
    // uniform identity coupling turns the L^2(mu (x) mu) gaps into
    // Frobenius norms over n
    const auto k1 = centered_kernel(x1, Mode::measure);
    const auto k2 = centered_kernel(x2, Mode::measure);
    CHECK(res.raw_gap ==
          doctest::Approx((k1.values - k2.values).norm() / n).epsilon(1e-10));
    CHECK(res.projected_gap ==
          doctest::Approx((psd_project(k1).values - psd_project(k2).values).norm() / n)
              .epsilon(1e-10));
    CHECK(res.holds);
  }
  SUBCASE("randomized chain: projected <= raw <= bound") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
      const auto x = random_metric_space(6, 900 + 2 * trial);
      const auto y = random_metric_space(6, 901 + 2 * trial);
      std::vector<int> perm = identity_perm(6);
      rng.shuffle(perm.begin(), perm.end());
      const auto c = permutation_coupling(x, y, perm);
      const auto proj = projection_stability_check(x, y, c);
      const auto gap = kernel_gap_bound_check(x, y, c);
      CHECK(proj.holds);
      CHECK(gap.holds);
      CHECK(proj.raw_gap == doctest::Approx(gap.lhs_kernel_gap).epsilon(1e-12));
      // diameter gap lower bound through the coupling cost
      const double dx = diam_p(x, 2.0), dy = diam_p(y, 2.0);
      CHECK(0.5 * std::abs(dx - dy) <= gw_cost(x, y, c, 2.0) + 1e-9);
    }
  }
}

TEST_CASE("consistency experiment") {
  SUBCASE("circle grids shrink the eigenvalue gaps monotonically") {
    const std::vector<int> sizes = {22, 46, 94};
    const auto table = consistency_experiment(ConsistencyTarget::circle, 2,
                                              sizes, 0, 3);
    REQUIRE(table.rows.size() == 9);
    const int gap_col = 5;
    REQUIRE(table.columns[gap_col] == "abs_gap");
    for (int k = 0; k < 3; ++k) {
      double prev = 1e300;
      for (std::size_t block = 0; block < 3; ++block) {
        const double gap = table.rows[3 * block + k][gap_col];
        CHECK(gap < prev);
        prev = gap;
      }
    }
  }
  SUBCASE("sphere run produces clusters and a metric-identity column") {
    const std::vector<int> sizes = {150};
    const auto table = consistency_experiment(ConsistencyTarget::sphere, 3,
                                              sizes, 4242, 2);
    REQUIRE(table.rows.size() == 2);
    // first oracle entry is lambda_{1,3} with multiplicity 3
    CHECK(table.rows[0][6] == 3.0);                       // cluster_size
    CHECK(table.rows[0][4] ==
          doctest::Approx(M_PI * M_PI / 16).epsilon(1e-9));  // oracle_value
    CHECK(table.rows[0][3] ==
          doctest::Approx(M_PI * M_PI / 16).epsilon(0.25));  // cluster_mean
    const double med = table.rows[0][7];
    CHECK(med < 0.2);
  }
  SUBCASE("singleton size is reported without error") {
    const std::vector<int> sizes = {1};
    const auto table =
        consistency_experiment(ConsistencyTarget::circle, 2, sizes, 0, 2);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0][0] == 1.0);
  }
  SUBCASE("empty size list is rejected") {
    CHECK_THROWS_AS(consistency_experiment(ConsistencyTarget::circle, 2, {}, 0, 2),
                    Error);
  }
}
