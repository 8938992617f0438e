#include <algorithm>
#include <cmath>
#include <vector>

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

FiniteMmSpace random_weighted_space(int n, std::uint64_t seed) {
  auto s = random_metric_space(n, seed);
  Rng rng(seed + 1000);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = rng.uniform(0.5, 1.5);
  return make_space(s.dist, w);
}

}  // namespace

TEST_CASE("four-point spectrum is {2, 2, 0, -1/4}") {
  const auto s = eigendecompose(centered_kernel(four_point(), Mode::matrix));
  REQUIRE(s.size() == 4);
  CHECK(s.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(s.eigenvalues(2)) <= 1e-12);
  CHECK(s.eigenvalues(3) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(s.pr() == 2);
  CHECK(s.nr() == 1);
  CHECK(s.pr() + s.nr() + 1 == 4);
}

TEST_CASE("paley spectra in both conventions") {
  const int q = 13;
  const auto space = paley(q);
  const double lp = (5.0 + 3.0 * std::sqrt(13.0)) / 4.0;
  const double lm = (5.0 - 3.0 * std::sqrt(13.0)) / 4.0;

  const auto mat = eigendecompose(centered_kernel(space, Mode::matrix));
  for (int i = 0; i < 6; ++i) {
    CHECK(mat.eigenvalues(i) == doctest::Approx(lp).epsilon(1e-12));
    CHECK(mat.eigenvalues(12 - i) == doctest::Approx(lm).epsilon(1e-12));
  }
  CHECK(std::abs(mat.eigenvalues(6)) <= mat.zero_tol);

  const auto op = eigendecompose(centered_kernel(space, Mode::measure));
  for (int i = 0; i < 6; ++i) {
    CHECK(op.eigenvalues(i) == doctest::Approx(lp / q).epsilon(1e-12));
    CHECK(op.eigenvalues(12 - i) == doctest::Approx(lm / q).epsilon(1e-12));
  }

  // matrix-mode negative trace: (3 sqrt(q) - 5)(q - 1)/8
  CHECK(negative_trace(mat) ==
        doctest::Approx((3.0 * std::sqrt(13.0) - 5.0) * 12.0 / 8.0)
            .epsilon(1e-12));
}

TEST_CASE("singleton spectrum") {
  Eigen::MatrixXd one(1, 1);
  one << 0.0;
  const auto s = eigendecompose(centered_kernel(make_space(one), Mode::measure));
  CHECK(s.size() == 1);
  CHECK(s.eigenvalues(0) == 0.0);
  CHECK(s.pr() == 0);
}

TEST_CASE("measure-mode eigenpairs satisfy the operator contract") {
  const auto space = random_weighted_space(25, 77);
  const auto k = centered_kernel(space, Mode::measure);
  const auto s = eigendecompose(k);
  const int n = s.size();

  // L^2(mu)-orthonormality
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double ip =
          (s.eigenfunctions.col(a).array() * s.eigenfunctions.col(b).array() *
           space.weights.array())
              .sum();
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 1e-9);
    }
  }
  // eigen-residual of the operator action
  for (int m = 0; m < n; ++m) {
    const Eigen::VectorXd action =
        k.values * space.weights.asDiagonal() * s.eigenfunctions.col(m);
    const double res =
        (action - s.eigenvalues(m) * s.eigenfunctions.col(m)).cwiseAbs().maxCoeff();
    CHECK(res <= 1e-9 * (1.0 + std::abs(s.eigenvalues(m))));
  }
  // mean-zero eigenfunctions off the kernel
  for (int m = 0; m < n; ++m) {
    if (std::abs(s.eigenvalues(m)) > s.zero_tol) {
      CHECK(std::abs(space.weights.dot(s.eigenfunctions.col(m))) <= 1e-9);
    }
  }
  CHECK(s.pr() + s.nr() <= n);
}

TEST_CASE("deterministic sign convention") {
  const auto space = random_weighted_space(12, 5);
  const auto s = eigendecompose(centered_kernel(space, Mode::measure));
  for (int m = 0; m < s.size(); ++m) {
    int arg = 0;
    for (int i = 1; i < s.size(); ++i) {
      if (std::abs(s.eigenfunctions(i, m)) > std::abs(s.eigenfunctions(arg, m))) {
        arg = i;
      }
    }
    CHECK(s.eigenfunctions(arg, m) > 0.0);
  }
}

TEST_CASE("spectrum scaling between modes") {
  const auto space = polygon(10);
  const auto mat = eigendecompose(centered_kernel(space, Mode::matrix));
  const auto op = eigendecompose(centered_kernel(space, Mode::measure));
  for (int i = 0; i < space.size(); ++i) {
    CHECK(op.eigenvalues(i) ==
          doctest::Approx(mat.eigenvalues(i) / 10.0).epsilon(1e-11));
  }
}

TEST_CASE("eigenvalue sum equals the trace identity") {
  const auto space = random_weighted_space(30, 9);
  const auto s = eigendecompose(centered_kernel(space, Mode::measure));
  const double d2 = diam_p(space, 2.0);
  CHECK(s.eigenvalues.sum() ==
        doctest::Approx(0.5 * d2 * d2).epsilon(1e-9));
}

TEST_CASE("psd projection") {
  SUBCASE("fixes PSD inputs") {
    Eigen::MatrixXd d(4, 4);
    const double r2 = std::sqrt(2.0);
    d << 0, 1, r2, 1, 1, 0, 1, r2, r2, 1, 0, 1, 1, r2, 1, 0;
    const auto k = centered_kernel(make_space(d), Mode::matrix);
    const auto p = psd_project(k);
    CHECK((p.values - k.values).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("four-point projection clips the negative eigenvalue") {
    const auto k = centered_kernel(four_point(), Mode::matrix);
    const auto p = psd_project(k);
    const auto ps = eigendecompose(
        CenteredKernel{p.values, Mode::matrix, p.weights});
    CHECK(ps.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(ps.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(std::abs(ps.eigenvalues(2)) <= 1e-10);
    CHECK(std::abs(ps.eigenvalues(3)) <= 1e-10);
    CHECK((k.values - p.values).norm() == doctest::Approx(0.25).epsilon(1e-11));
  }
  SUBCASE("frobenius gap is the negative part, hexagon") {
    const auto k = centered_kernel(polygon(6), Mode::matrix);
    const auto s = eigendecompose(k);
    const auto p = psd_project(k);
    // direct negative-part reconstruction
    Eigen::MatrixXd neg = Eigen::MatrixXd::Zero(6, 6);
    double sumsq = 0.0;
    for (int m = 0; m < 6; ++m) {
      if (s.eigenvalues(m) < -s.zero_tol) {
        neg += s.eigenvalues(m) * s.eigenfunctions.col(m) *
               s.eigenfunctions.col(m).transpose();
        sumsq += s.eigenvalues(m) * s.eigenvalues(m);
      }
    }
    CHECK(((k.values - p.values) - neg).cwiseAbs().maxCoeff() <= 1e-11);
    const double gap = (k.values - p.values).squaredNorm();
    CHECK(gap == doctest::Approx(sumsq).epsilon(1e-10));
  }
  SUBCASE("rank bounds") {
    const auto k = centered_kernel(four_point(), Mode::matrix);
    const auto p1 = psd_project(k, 1);
    const auto s1 = eigendecompose(CenteredKernel{p1.values, Mode::matrix, p1.weights});
    CHECK(s1.pr() == 1);
    CHECK_THROWS_AS(psd_project(k, 3), Error);  // pr = 2
  }
}

TEST_CASE("trace norms") {
  const auto s = eigendecompose(centered_kernel(paley(13), Mode::matrix));
  const double lp = (5.0 + 3.0 * std::sqrt(13.0)) / 4.0;
  const double lm = (3.0 * std::sqrt(13.0) - 5.0) / 4.0;
  CHECK(trace_norm(s) == doctest::Approx(6 * (lp + lm)).epsilon(1e-11));

  Eigen::MatrixXd d(4, 4);
  const double r2 = std::sqrt(2.0);
  d << 0, 1, r2, 1, 1, 0, 1, r2, r2, 1, 0, 1, 1, r2, 1, 0;
  const auto psd = eigendecompose(centered_kernel(make_space(d), Mode::matrix));
  CHECK(negative_trace(psd) == 0.0);
}

TEST_CASE("polygon negative trace closed form") {
  for (int m : {1, 2, 3}) {
    const auto s = eigendecompose(centered_kernel(polygon(4 * m + 2), Mode::matrix));
    const double c = M_PI / (2 * m + 1);
    const double expect = c * c * m * (m + 1.0) * (4 * m + 2) / 3.0;
    CHECK(negative_trace(s) == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("optimality against random low-rank PSD matrices") {
  Rng rng(31);
  for (int inst = 0; inst < 3; ++inst) {
    const auto space = random_metric_space(8, 100 + inst);
    const auto k = centered_kernel(space, Mode::matrix);
    const auto s = eigendecompose(k);
    const int rank = 1 + inst % std::max(1, s.pr());
    const auto best = psd_project(k, rank);
    const double best_gap = (k.values - best.values).norm();
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd b(8, rank);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < rank; ++j) b(i, j) = rng.normal();
      }
      const Eigen::MatrixXd a = b * b.transpose();
      CHECK((k.values - a).norm() >= best_gap - 1e-9);
    }
  }
}

TEST_CASE("projection is non-expansive across metrics") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto x1 = random_metric_space(9, 500 + 2 * trial);
    const auto x2 = random_metric_space(9, 501 + 2 * trial);
    const auto k1 = centered_kernel(x1, Mode::matrix);
    const auto k2 = centered_kernel(x2, Mode::matrix);
    const double before = (k1.values - k2.values).norm();
    const double after = (psd_project(k1).values - psd_project(k2).values).norm();
    CHECK(after <= before + 1e-9);
  }
}
