// Exercises the shared-library C surface end to end.
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmds.h"

namespace {

const double kFourPoint[16] = {0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0};

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("version and error strings") {
  CHECK(std::strlen(mmds_version()) > 0);
  mmds_space* s = nullptr;
  CHECK(mmds_space_polygon(2, &s) == MMDS_ERR_INVALID_SPEC);
  CHECK(std::strlen(mmds_last_error()) > 0);
  CHECK(mmds_space_polygon(6, &s) == MMDS_OK);
  CHECK(std::strlen(mmds_last_error()) == 0);
  mmds_space_free(s);
}

TEST_CASE("four-point pipeline through the C API") {
  mmds_space* space = nullptr;
  REQUIRE(mmds_space_create(4, kFourPoint, nullptr, &space) == MMDS_OK);
  CHECK(mmds_space_size(space) == 4);

  double diam2 = 0;
  CHECK(mmds_space_diam(space, 2.0, &diam2) == MMDS_OK);
  CHECK(diam2 > 0);

  int embeddable = 1;
  double min_eig = 0;
  CHECK(mmds_space_is_euclidean(space, -1.0, &embeddable, &min_eig) == MMDS_OK);
  CHECK(embeddable == 0);
  CHECK(min_eig == doctest::Approx(-0.25).epsilon(1e-12));

  mmds_kernel* kernel = nullptr;
  REQUIRE(mmds_kernel_centered(space, MMDS_MODE_MATRIX, &kernel) == MMDS_OK);
  std::vector<double> kv(16);
  CHECK(mmds_kernel_values(kernel, kv.data()) == MMDS_OK);
  CHECK(kv[0] == doctest::Approx(-3.0 / 16).epsilon(1e-14));
  CHECK(kv[5] == doctest::Approx(21.0 / 16).epsilon(1e-14));

  mmds_spectrum* spec = nullptr;
  REQUIRE(mmds_spectrum_compute(kernel, -1.0, &spec) == MMDS_OK);
  CHECK(mmds_spectrum_pr(spec) == 2);
  CHECK(mmds_spectrum_nr(spec) == 1);
  std::vector<double> ev(4);
  CHECK(mmds_spectrum_eigenvalues(spec, ev.data()) == MMDS_OK);
  CHECK(ev[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev[3] == doctest::Approx(-0.25).epsilon(1e-12));
  double neg = 0;
  CHECK(mmds_spectrum_negative_trace(spec, &neg) == MMDS_OK);
  CHECK(neg == doctest::Approx(0.25).epsilon(1e-12));

  mmds_embedding* emb = nullptr;
  REQUIRE(mmds_embedding_create(spec, 2, &emb) == MMDS_OK);
  std::vector<double> dist(16);
  CHECK(mmds_embedding_distances(emb, dist.data()) == MMDS_OK);
  CHECK(dist[1] == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(dist[6] == doctest::Approx(2.0).epsilon(1e-9));
  double dis = 0;
  CHECK(mmds_embedding_distortion(space, emb, &dis) == MMDS_OK);
  CHECK(dis == doctest::Approx(std::sqrt(2.0 * 0.25 / 4.0)).epsilon(1e-9));

  mmds_embedding* too_big = nullptr;
  CHECK(mmds_embedding_create(spec, 3, &too_big) == MMDS_ERR_DIMENSION);

  mmds_embedding_free(emb);
  mmds_spectrum_free(spec);
  mmds_kernel_free(kernel);
  mmds_space_free(space);
}

TEST_CASE("psd projection through the C API") {
  mmds_space* space = nullptr;
  REQUIRE(mmds_space_create(4, kFourPoint, nullptr, &space) == MMDS_OK);
  mmds_kernel* kernel = nullptr;
  REQUIRE(mmds_kernel_centered(space, MMDS_MODE_MATRIX, &kernel) == MMDS_OK);
  mmds_kernel* projected = nullptr;
  REQUIRE(mmds_kernel_psd_project(kernel, 0, &projected) == MMDS_OK);
  std::vector<double> kv(16), pv(16);
  CHECK(mmds_kernel_values(kernel, kv.data()) == MMDS_OK);
  CHECK(mmds_kernel_values(projected, pv.data()) == MMDS_OK);
  double gap = 0;
  for (int i = 0; i < 16; ++i) gap += (kv[i] - pv[i]) * (kv[i] - pv[i]);
  CHECK(std::sqrt(gap) == doctest::Approx(0.25).epsilon(1e-11));

  mmds_kernel* bad = nullptr;
  CHECK(mmds_kernel_psd_project(kernel, 5, &bad) == MMDS_ERR_RANK);

  mmds_kernel_free(projected);
  mmds_kernel_free(kernel);
  mmds_space_free(space);
}

TEST_CASE("file loading and error codes") {
  const auto csv = write_temp("capi_m.csv", "0,1\n1,0\n");
  mmds_space* s = nullptr;
  CHECK(mmds_space_load_csv(csv.c_str(), nullptr, &s) == MMDS_OK);
  mmds_space_free(s);

  const auto bad = write_temp("capi_bad.csv", "0,1\n2,0\n");
  CHECK(mmds_space_load_csv(bad.c_str(), nullptr, &s) == MMDS_ERR_METRIC);
  CHECK(mmds_space_load_csv("/nonexistent/file.csv", nullptr, &s) == MMDS_ERR_IO);

  const auto edges = write_temp("capi_e.txt", "0 1 1\n1 2 2\n");
  CHECK(mmds_space_load_edges(edges.c_str(), nullptr, &s) == MMDS_OK);
  std::vector<double> d(9);
  CHECK(mmds_space_distances(s, d.data()) == MMDS_OK);
  CHECK(d[2] == 3.0);
  mmds_space_free(s);

  const auto disc = write_temp("capi_d.txt", "0 1 1\n2 3 1\n");
  CHECK(mmds_space_load_edges(disc.c_str(), nullptr, &s) == MMDS_ERR_DISCONNECTED);
}

TEST_CASE("generators and clouds through the C API") {
  mmds_space* torus = nullptr;
  REQUIRE(mmds_space_torus_grid(2, 6, &torus) == MMDS_OK);
  CHECK(mmds_space_size(torus) == 36);
  mmds_space_free(torus);

  const int qs[2] = {5, 13};
  mmds_space* glued = nullptr;
  REQUIRE(mmds_space_glued_paley(qs, 2, &glued) == MMDS_OK);
  CHECK(mmds_space_size(glued) == 18);
  std::vector<double> w(18);
  CHECK(mmds_space_weights(glued, w.data()) == MMDS_OK);
  double total = 0;
  for (double v : w) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  mmds_space_free(glued);

  mmds_cloud* cloud = nullptr;
  REQUIRE(mmds_cloud_ellipse(2.0, 1.0, 400, 5, &cloud) == MMDS_OK);
  CHECK(mmds_cloud_size(cloud) == 400);
  CHECK(mmds_cloud_dim(cloud) == 2);
  double th = 0;
  CHECK(mmds_cloud_thickness(cloud, &th) == MMDS_OK);
  CHECK(th > 0.3);
  CHECK(th < 0.7);
  double cov[2];
  CHECK(mmds_cloud_covariance_eigenvalues(cloud, cov) == MMDS_OK);
  CHECK(cov[0] >= cov[1]);
  mmds_space* from_cloud = nullptr;
  CHECK(mmds_cloud_to_space(cloud, &from_cloud) == MMDS_OK);
  CHECK(mmds_space_size(from_cloud) == 400);
  mmds_space_free(from_cloud);
  mmds_cloud_free(cloud);
}

TEST_CASE("special functions through the C API") {
  double v = 0;
  CHECK(mmds_legendre(2, 3, 0.0, &v) == MMDS_OK);
  CHECK(v == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(mmds_legendre(2, 3, 1.5, &v) == MMDS_ERR_DOMAIN);
  long long n = 0;
  CHECK(mmds_harmonic_dim(4, 3, &n) == MMDS_OK);
  CHECK(n == 9);
  CHECK(mmds_sphere_area(3, &v) == MMDS_OK);
  CHECK(v == doctest::Approx(4 * M_PI).epsilon(1e-13));
}

TEST_CASE("oracles through the C API") {
  mmds_oracle* circle = nullptr;
  REQUIRE(mmds_oracle_circle(10, &circle) == MMDS_OK);
  CHECK(mmds_oracle_entry_count(circle) == 11);
  std::vector<int> orders(11);
  std::vector<double> values(11);
  std::vector<long long> mults(11);
  CHECK(mmds_oracle_entries(circle, orders.data(), values.data(), mults.data()) ==
        MMDS_OK);
  CHECK(values[1] == 1.0);
  CHECK(mults[1] == 2);
  mmds_oracle_free(circle);

  double lam = 0;
  long long mult = 0;
  CHECK(mmds_sphere_eigenvalue(2, 3, MMDS_METHOD_QUADRATURE, &lam, &mult) ==
        MMDS_OK);
  CHECK(lam == doctest::Approx(-1.0 / 9).epsilon(1e-10));
  CHECK(mult == 5);
  CHECK(mmds_sphere_eigenvalue(2, 3, MMDS_METHOD_CLOSED_FORM, &lam, &mult) ==
        MMDS_ERR_PARITY);

  double eta = 0;
  CHECK(mmds_sphere_eta(1, 3, MMDS_METHOD_CLOSED_FORM, &eta, nullptr) == MMDS_OK);
  CHECK(eta == doctest::Approx(-M_PI / 8).epsilon(1e-12));

  double pos_sum, trace, ni, np, d2, pt, nt;
  CHECK(mmds_sphere_summaries(3, 60, &pos_sum, &trace, &ni, &np, &d2, &pt, &nt,
                              nullptr) == MMDS_OK);
  CHECK(std::abs(pos_sum + pt - M_PI * M_PI / 4.0) < 1e-3);

  const double angles[3] = {0.0, 1.0, M_PI};
  double err = 0;
  CHECK(mmds_sphere_metric_identity(2, 2000, angles, 3, &err) == MMDS_OK);
  CHECK(err < 5e-3);

  mmds_oracle* s2f = nullptr;
  REQUIRE(mmds_oracle_s2_transform(MMDS_S2F_SQRT_EUCLIDEAN, 5, &s2f) == MMDS_OK);
  std::vector<double> tv(mmds_oracle_entry_count(s2f));
  CHECK(mmds_oracle_entries(s2f, nullptr, tv.data(), nullptr) == MMDS_OK);
  CHECK(tv[1] == doctest::Approx(2.0 / 15).epsilon(1e-11));
  mmds_oracle_free(s2f);
}

TEST_CASE("stability checks through the C API") {
  mmds_space* x = nullptr;
  mmds_space* y = nullptr;
  REQUIRE(mmds_space_random_metric(6, 100, &x) == MMDS_OK);
  REQUIRE(mmds_space_random_metric(6, 101, &y) == MMDS_OK);

  mmds_coupling* c = nullptr;
  REQUIRE(mmds_coupling_product(x, y, &c) == MMDS_OK);
  CHECK(mmds_coupling_rows(c) == 6);

  double gw = 0;
  CHECK(mmds_gw_cost(x, y, c, 2.0, &gw) == MMDS_OK);
  CHECK(gw > 0);

  double lhs, rhs, projected, raw;
  int holds = 0;
  CHECK(mmds_kernel_gap_check(x, y, c, &lhs, &rhs, &holds) == MMDS_OK);
  CHECK(holds == 1);
  CHECK(mmds_projection_stability_check(x, y, c, &projected, &raw, &holds) ==
        MMDS_OK);
  CHECK(holds == 1);
  CHECK(projected <= raw + 1e-9);

  double cost = 0;
  std::vector<int> perm(6);
  CHECK(mmds_gw_upper_bound(x, y, MMDS_GW_ENUMERATE, 2, &cost, perm.data()) ==
        MMDS_OK);
  CHECK(cost <= gw + 1e-12);

  mmds_coupling_free(c);
  mmds_space_free(y);
  mmds_space_free(x);
}

TEST_CASE("consistency table through the C API") {
  const int sizes[2] = {22, 46};
  mmds_table* table = nullptr;
  REQUIRE(mmds_consistency_run(MMDS_TARGET_CIRCLE, 2, sizes, 2, 0, 2, &table) ==
          MMDS_OK);
  CHECK(mmds_table_rows(table) == 4);
  CHECK(std::string(mmds_table_column_name(table, 0)) == "n");
  CHECK(mmds_table_value(table, 0, 0) == 22.0);
  // gap shrinks from n=22 to n=46 for k=1
  const double gap22 = mmds_table_value(table, 0, 5);
  const double gap46 = mmds_table_value(table, 2, 5);
  CHECK(gap46 < gap22);
  mmds_table_free(table);
}
