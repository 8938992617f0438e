#include "mmds.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "core/embedding.hpp"
#include "core/error.hpp"
#include "core/kernel.hpp"
#include "core/oracle.hpp"
#include "core/space.hpp"
#include "core/special.hpp"
#include "core/spectral.hpp"
#include "core/stability.hpp"
#include "core/types.hpp"

struct mmds_space {
  mmds::FiniteMmSpace impl;
};
struct mmds_cloud {
  mmds::PointCloud impl;
};
struct mmds_kernel {
  // PSD projections reuse this handle; `values` then holds K^+.
  Eigen::MatrixXd values;
  mmds::Mode mode;
  Eigen::VectorXd weights;
};
struct mmds_spectrum {
  mmds::Spectrum impl;
};
struct mmds_embedding {
  mmds::Embedding impl;
};
struct mmds_oracle {
  mmds::oracle::OracleSpectrum impl;
};
struct mmds_coupling {
  mmds::Coupling impl;
};
struct mmds_table {
  mmds::ResultTable impl;
};

namespace {

thread_local std::string g_last_error;

mmds_status to_status(mmds::ErrorCode code) {
  using EC = mmds::ErrorCode;
  switch (code) {
    case EC::parse: return MMDS_ERR_PARSE;
    case EC::metric_violation: return MMDS_ERR_METRIC;
    case EC::weight: return MMDS_ERR_WEIGHT;
    case EC::disconnected_graph: return MMDS_ERR_DISCONNECTED;
    case EC::invalid_spec: return MMDS_ERR_INVALID_SPEC;
    case EC::not_homogeneous: return MMDS_ERR_NOT_HOMOGENEOUS;
    case EC::convergence_failure: return MMDS_ERR_CONVERGENCE;
    case EC::rank_too_large: return MMDS_ERR_RANK;
    case EC::dimension_too_large: return MMDS_ERR_DIMENSION;
    case EC::mode_mismatch: return MMDS_ERR_MODE;
    case EC::domain: return MMDS_ERR_DOMAIN;
    case EC::overflow: return MMDS_ERR_OVERFLOW;
    case EC::parity: return MMDS_ERR_PARITY;
    case EC::no_convergence: return MMDS_ERR_NO_CONVERGENCE;
    case EC::marginal_mismatch: return MMDS_ERR_MARGINAL;
    case EC::too_large_to_enumerate: return MMDS_ERR_TOO_LARGE;
    case EC::kernel_assumption_unmet: return MMDS_ERR_KERNEL_ASSUMPTION;
    case EC::bad_argument: return MMDS_ERR_BAD_ARGUMENT;
    case EC::io: return MMDS_ERR_IO;
  }
  return MMDS_ERR_BAD_ARGUMENT;
}

template <typename Fn>
mmds_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MMDS_OK;
  } catch (const mmds::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MMDS_ERR_BAD_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MMDS_ERR_BAD_ARGUMENT;
  }
}

mmds_status require(bool ok, const char* msg) {
  if (ok) return MMDS_OK;
  g_last_error = msg;
  return MMDS_ERR_BAD_ARGUMENT;
}

void copy_rowmajor(const Eigen::MatrixXd& m, double* buf) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      buf[i * m.cols() + j] = m(i, j);
    }
  }
}

mmds::Mode to_mode(mmds_mode m) {
  return m == MMDS_MODE_MATRIX ? mmds::Mode::matrix : mmds::Mode::measure;
}

}  // namespace

extern "C" {

const char* mmds_version(void) { return "0.1.0"; }

const char* mmds_last_error(void) { return g_last_error.c_str(); }

/* ---- spaces ---- */

mmds_status mmds_space_create(int n, const double* dist, const double* weights,
                              mmds_space** out) {
  if (auto st = require(dist && out && n > 0, "bad arguments")) return st;
  return guarded([&] {
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = dist[i * n + j];
    }
    Eigen::VectorXd w;
    if (weights) w = Eigen::Map<const Eigen::VectorXd>(weights, n);
    *out = new mmds_space{mmds::make_space(std::move(d), std::move(w))};
  });
}

mmds_status mmds_space_load_csv(const char* path, const char* weights_path,
                                mmds_space** out) {
  if (auto st = require(path && out, "bad arguments")) return st;
  return guarded([&] {
    std::optional<std::string> w;
    if (weights_path) w = weights_path;
    *out = new mmds_space{
        mmds::load_space(path, mmds::SpaceFormat::csv_matrix, w)};
  });
}

mmds_status mmds_space_load_edges(const char* path, const char* weights_path,
                                  mmds_space** out) {
  if (auto st = require(path && out, "bad arguments")) return st;
  return guarded([&] {
    std::optional<std::string> w;
    if (weights_path) w = weights_path;
    *out = new mmds_space{
        mmds::load_space(path, mmds::SpaceFormat::edge_list, w)};
  });
}

mmds_status mmds_space_polygon(int n, mmds_space** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = new mmds_space{mmds::polygon(n)}; });
}

mmds_status mmds_space_paley(int q, mmds_space** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = new mmds_space{mmds::paley(q)}; });
}

mmds_status mmds_space_sphere_sample(int d, int n, uint64_t seed,
                                     mmds_space** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = new mmds_space{mmds::sphere_sample(d, n, seed)}; });
}

mmds_status mmds_space_torus_grid(int n_factors, int n_per_factor,
                                  mmds_space** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded(
      [&] { *out = new mmds_space{mmds::torus_grid(n_factors, n_per_factor)}; });
}

mmds_status mmds_space_glued_paley(const int* qs, int count, mmds_space** out) {
  if (auto st = require(qs && out && count > 0, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_space{
        mmds::glued_paley_truncation(std::vector<int>(qs, qs + count))};
  });
}

mmds_status mmds_space_random_metric(int n, uint64_t seed, mmds_space** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded(
      [&] { *out = new mmds_space{mmds::random_metric_space(n, seed)}; });
}

mmds_status mmds_space_product(const mmds_space* x, const mmds_space* y,
                               mmds_space** out) {
  if (auto st = require(x && y && out, "bad arguments")) return st;
  return guarded(
      [&] { *out = new mmds_space{mmds::product_space(x->impl, y->impl)}; });
}

int mmds_space_size(const mmds_space* s) { return s ? s->impl.size() : 0; }

mmds_status mmds_space_distances(const mmds_space* s, double* buf) {
  if (auto st = require(s && buf, "bad arguments")) return st;
  copy_rowmajor(s->impl.dist, buf);
  return MMDS_OK;
}

mmds_status mmds_space_weights(const mmds_space* s, double* buf) {
  if (auto st = require(s && buf, "bad arguments")) return st;
  std::memcpy(buf, s->impl.weights.data(), sizeof(double) * s->impl.size());
  return MMDS_OK;
}

mmds_status mmds_space_diam(const mmds_space* s, double p, double* out) {
  if (auto st = require(s && out, "bad arguments")) return st;
  return guarded([&] { *out = mmds::diam_p(s->impl, p); });
}

mmds_status mmds_space_is_euclidean(const mmds_space* s, double tol,
                                    int* embeddable, double* min_eigenvalue) {
  if (auto st = require(s && embeddable && min_eigenvalue, "bad arguments")) {
    return st;
  }
  return guarded([&] {
    const auto check = mmds::is_euclidean(s->impl, tol < 0 ? 1e-9 : tol);
    *embeddable = check.embeddable ? 1 : 0;
    *min_eigenvalue = check.min_eigenvalue;
  });
}

void mmds_space_free(mmds_space* s) { delete s; }

/* ---- clouds ---- */

mmds_status mmds_cloud_create(int n, int k, const double* points,
                              const double* weights, mmds_cloud** out) {
  if (auto st = require(points && out && n > 0 && k > 0, "bad arguments")) {
    return st;
  }
  return guarded([&] {
    Eigen::MatrixXd pts(n, k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) pts(i, j) = points[i * k + j];
    }
    if (!pts.allFinite()) mmds::fail(mmds::ErrorCode::parse, "non-finite point");
    Eigen::VectorXd w;
    if (weights) {
      w = Eigen::Map<const Eigen::VectorXd>(weights, n);
      if ((w.array() <= 0).any()) {
        mmds::fail(mmds::ErrorCode::weight, "weights must be positive");
      }
      w /= w.sum();
    } else {
      w = Eigen::VectorXd::Constant(n, 1.0 / n);
    }
    *out = new mmds_cloud{mmds::PointCloud{std::move(pts), std::move(w)}};
  });
}

mmds_status mmds_cloud_load_csv(const char* path, const char* weights_path,
                                mmds_cloud** out) {
  if (auto st = require(path && out, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_cloud{mmds::load_cloud_csv(
        path, weights_path ? std::optional<std::string>(weights_path)
                           : std::nullopt)};
  });
}

mmds_status mmds_cloud_ellipse(double a, double b, int n, uint64_t seed,
                               mmds_cloud** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = new mmds_cloud{mmds::ellipse_cloud(a, b, n, seed)}; });
}

int mmds_cloud_size(const mmds_cloud* c) { return c ? c->impl.size() : 0; }
int mmds_cloud_dim(const mmds_cloud* c) { return c ? c->impl.dim() : 0; }

mmds_status mmds_cloud_points(const mmds_cloud* c, double* buf) {
  if (auto st = require(c && buf, "bad arguments")) return st;
  copy_rowmajor(c->impl.points, buf);
  return MMDS_OK;
}

mmds_status mmds_cloud_thickness(const mmds_cloud* c, double* out) {
  if (auto st = require(c && out, "bad arguments")) return st;
  return guarded([&] { *out = mmds::thickness(c->impl); });
}

mmds_status mmds_cloud_covariance_eigenvalues(const mmds_cloud* c, double* buf) {
  if (auto st = require(c && buf, "bad arguments")) return st;
  return guarded([&] {
    const Eigen::VectorXd ev = mmds::covariance_eigenvalues(c->impl);
    std::memcpy(buf, ev.data(), sizeof(double) * ev.size());
  });
}

mmds_status mmds_cloud_to_space(const mmds_cloud* c, mmds_space** out) {
  if (auto st = require(c && out, "bad arguments")) return st;
  return guarded([&] { *out = new mmds_space{mmds::space_from_cloud(c->impl)}; });
}

void mmds_cloud_free(mmds_cloud* c) { delete c; }

/* ---- kernels ---- */

mmds_status mmds_kernel_centered(const mmds_space* s, mmds_mode mode,
                                 mmds_kernel** out) {
  if (auto st = require(s && out, "bad arguments")) return st;
  return guarded([&] {
    auto k = mmds::centered_kernel(s->impl, to_mode(mode));
    *out = new mmds_kernel{std::move(k.values), k.mode, std::move(k.weights)};
  });
}

mmds_status mmds_kernel_two_point_homogeneous(const mmds_space* s,
                                              mmds_kernel** out) {
  if (auto st = require(s && out, "bad arguments")) return st;
  return guarded([&] {
    auto k = mmds::two_point_homogeneous_kernel(s->impl);
    *out = new mmds_kernel{std::move(k.values), k.mode, std::move(k.weights)};
  });
}

mmds_status mmds_kernel_psd_project(const mmds_kernel* k, int rank_bound,
                                    mmds_kernel** out) {
  if (auto st = require(k && out, "bad arguments")) return st;
  return guarded([&] {
    mmds::CenteredKernel ck{k->values, k->mode, k->weights};
    std::optional<int> bound;
    if (rank_bound > 0) bound = rank_bound;
    auto p = mmds::psd_project(ck, bound);
    *out = new mmds_kernel{std::move(p.values), p.mode, std::move(p.weights)};
  });
}

int mmds_kernel_size(const mmds_kernel* k) {
  return k ? static_cast<int>(k->values.rows()) : 0;
}

mmds_status mmds_kernel_values(const mmds_kernel* k, double* buf) {
  if (auto st = require(k && buf, "bad arguments")) return st;
  copy_rowmajor(k->values, buf);
  return MMDS_OK;
}

void mmds_kernel_free(mmds_kernel* k) { delete k; }

/* ---- spectra ---- */

mmds_status mmds_spectrum_compute(const mmds_kernel* k, double zero_tol,
                                  mmds_spectrum** out) {
  if (auto st = require(k && out, "bad arguments")) return st;
  return guarded([&] {
    mmds::CenteredKernel ck{k->values, k->mode, k->weights};
    *out = new mmds_spectrum{mmds::eigendecompose(ck, zero_tol)};
  });
}

int mmds_spectrum_size(const mmds_spectrum* s) { return s ? s->impl.size() : 0; }
int mmds_spectrum_pr(const mmds_spectrum* s) { return s ? s->impl.pr() : 0; }
int mmds_spectrum_nr(const mmds_spectrum* s) { return s ? s->impl.nr() : 0; }
double mmds_spectrum_zero_tol(const mmds_spectrum* s) {
  return s ? s->impl.zero_tol : 0.0;
}

mmds_status mmds_spectrum_eigenvalues(const mmds_spectrum* s, double* buf) {
  if (auto st = require(s && buf, "bad arguments")) return st;
  std::memcpy(buf, s->impl.eigenvalues.data(), sizeof(double) * s->impl.size());
  return MMDS_OK;
}

mmds_status mmds_spectrum_eigenfunctions(const mmds_spectrum* s, double* buf) {
  if (auto st = require(s && buf, "bad arguments")) return st;
  copy_rowmajor(s->impl.eigenfunctions, buf);
  return MMDS_OK;
}

mmds_status mmds_spectrum_trace_norm(const mmds_spectrum* s, double* out) {
  if (auto st = require(s && out, "bad arguments")) return st;
  *out = mmds::trace_norm(s->impl);
  return MMDS_OK;
}

mmds_status mmds_spectrum_negative_trace(const mmds_spectrum* s, double* out) {
  if (auto st = require(s && out, "bad arguments")) return st;
  *out = mmds::negative_trace(s->impl);
  return MMDS_OK;
}

void mmds_spectrum_free(mmds_spectrum* s) { delete s; }

/* ---- embeddings ---- */

mmds_status mmds_embedding_create(const mmds_spectrum* s, int k,
                                  mmds_embedding** out) {
  if (auto st = require(s && out, "bad arguments")) return st;
  return guarded([&] { *out = new mmds_embedding{mmds::embed(s->impl, k)}; });
}

int mmds_embedding_rows(const mmds_embedding* e) {
  return e ? e->impl.size() : 0;
}
int mmds_embedding_dim(const mmds_embedding* e) { return e ? e->impl.k : 0; }

mmds_status mmds_embedding_coords(const mmds_embedding* e, double* buf) {
  if (auto st = require(e && buf, "bad arguments")) return st;
  copy_rowmajor(e->impl.coords, buf);
  return MMDS_OK;
}

mmds_status mmds_embedding_distances(const mmds_embedding* e, double* buf) {
  if (auto st = require(e && buf, "bad arguments")) return st;
  return guarded([&] { copy_rowmajor(mmds::embedded_distances(e->impl), buf); });
}

mmds_status mmds_embedding_distortion(const mmds_space* s,
                                      const mmds_embedding* e, double* out) {
  if (auto st = require(s && e && out, "bad arguments")) return st;
  return guarded([&] { *out = mmds::distortion(s->impl, e->impl); });
}

mmds_status mmds_embedding_linf_check(const mmds_space* s,
                                      const mmds_embedding* e,
                                      double* max_excess, double* bound,
                                      int* holds) {
  if (auto st = require(s && e && max_excess && bound && holds, "bad arguments")) {
    return st;
  }
  return guarded([&] {
    const auto check = mmds::linf_distortion_bound_check(s->impl, e->impl);
    *max_excess = check.max_excess;
    *bound = check.bound;
    *holds = check.holds ? 1 : 0;
  });
}

void mmds_embedding_free(mmds_embedding* e) { delete e; }

/* ---- special functions ---- */

mmds_status mmds_legendre(int n, int d, double t, double* out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = mmds::special::legendre(n, d, t); });
}

mmds_status mmds_harmonic_dim(int n, int d, long long* out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = mmds::special::harmonic_dim(n, d); });
}

mmds_status mmds_sphere_area(int d, double* out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] { *out = mmds::special::sphere_area(d); });
}

/* ---- analytic spectra ---- */

namespace {

mmds::oracle::EvalMethod to_method(int m) {
  return m == MMDS_METHOD_CLOSED_FORM ? mmds::oracle::EvalMethod::closed_form
                                      : mmds::oracle::EvalMethod::quadrature;
}

mmds::oracle::S2Profile to_profile(int p) {
  return p == MMDS_S2F_SQRT_EUCLIDEAN
             ? mmds::oracle::S2Profile::sqrt_euclidean
             : mmds::oracle::S2Profile::geodesic;
}

}  // namespace

mmds_status mmds_oracle_circle(int max_order, mmds_oracle** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded(
      [&] { *out = new mmds_oracle{mmds::oracle::circle_spectrum(max_order)}; });
}

mmds_status mmds_oracle_sphere(int d, int max_order, mmds_oracle** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_oracle{mmds::oracle::sphere_spectrum(d, max_order)};
  });
}

mmds_status mmds_oracle_polygon(int m, mmds_oracle** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded(
      [&] { *out = new mmds_oracle{mmds::oracle::polygon_spectrum(m)}; });
}

mmds_status mmds_oracle_paley(int q, mmds_mode mode, mmds_oracle** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_oracle{mmds::oracle::paley_spectrum(q, to_mode(mode))};
  });
}

mmds_status mmds_oracle_torus(int n_factors, int max_order, mmds_oracle** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_oracle{mmds::oracle::torus_spectrum(n_factors, max_order)};
  });
}

mmds_status mmds_oracle_s2_transform(int profile, int max_order,
                                     mmds_oracle** out) {
  if (auto st = require(out != nullptr, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_oracle{
        mmds::oracle::s2_transform_spectrum(to_profile(profile), max_order)};
  });
}

mmds_status mmds_oracle_product(const mmds_oracle* a, const mmds_oracle* b,
                                mmds_oracle** out) {
  if (auto st = require(a && b && out, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_oracle{mmds::oracle::product_spectrum(a->impl, b->impl)};
  });
}

int mmds_oracle_entry_count(const mmds_oracle* o) {
  return o ? static_cast<int>(o->impl.entries.size()) : 0;
}

mmds_status mmds_oracle_entries(const mmds_oracle* o, int* orders,
                                double* values, long long* multiplicities) {
  if (auto st = require(o != nullptr, "bad arguments")) return st;
  for (std::size_t i = 0; i < o->impl.entries.size(); ++i) {
    if (orders) orders[i] = o->impl.entries[i].order;
    if (values) values[i] = o->impl.entries[i].value;
    if (multiplicities) multiplicities[i] = o->impl.entries[i].multiplicity;
  }
  return MMDS_OK;
}

int mmds_oracle_truncation_order(const mmds_oracle* o) {
  return o ? o->impl.truncation_order : 0;
}
double mmds_oracle_tail_estimate(const mmds_oracle* o) {
  return o ? o->impl.tail_abs_estimate : 0.0;
}
double mmds_oracle_positive_sum(const mmds_oracle* o) {
  return o ? mmds::oracle::positive_sum(o->impl) : 0.0;
}
double mmds_oracle_negative_sum(const mmds_oracle* o) {
  return o ? mmds::oracle::negative_sum(o->impl) : 0.0;
}
double mmds_oracle_trace_norm(const mmds_oracle* o) {
  return o ? mmds::oracle::trace_norm(o->impl) : 0.0;
}
void mmds_oracle_free(mmds_oracle* o) { delete o; }

mmds_status mmds_sphere_eigenvalue(int n, int d, int method, double* value,
                                   long long* multiplicity) {
  if (auto st = require(value != nullptr, "bad arguments")) return st;
  return guarded([&] {
    const auto e = mmds::oracle::sphere_eigenvalue(n, d, to_method(method));
    *value = e.value;
    if (multiplicity) *multiplicity = e.multiplicity;
  });
}

mmds_status mmds_sphere_eta(int n, int d, int method, double* value,
                            long long* multiplicity) {
  if (auto st = require(value != nullptr, "bad arguments")) return st;
  return guarded([&] {
    const auto e = mmds::oracle::sphere_eta(n, d, to_method(method));
    *value = e.value;
    if (multiplicity) *multiplicity = e.multiplicity;
  });
}

mmds_status mmds_s2_transform_eigenvalue(int n, int profile, double* value,
                                         long long* multiplicity) {
  if (auto st = require(value != nullptr, "bad arguments")) return st;
  return guarded([&] {
    const auto e = mmds::oracle::s2_transform_eigenvalue(n, to_profile(profile));
    *value = e.value;
    if (multiplicity) *multiplicity = e.multiplicity;
  });
}

mmds_status mmds_sphere_summaries(int d, int max_order, double* pos_sum,
                                  double* trace, double* neg_trace_identity,
                                  double* neg_trace_partial, double* diam2_sq,
                                  double* pos_tail, double* neg_tail,
                                  double* trace_norm_partials) {
  return guarded([&] {
    const auto s = mmds::oracle::sphere_summaries(d, max_order);
    if (pos_sum) *pos_sum = s.pos_sum;
    if (trace) *trace = s.trace;
    if (neg_trace_identity) *neg_trace_identity = s.neg_trace_identity;
    if (neg_trace_partial) *neg_trace_partial = s.neg_trace_partial;
    if (diam2_sq) *diam2_sq = s.diam2_sq;
    if (pos_tail) *pos_tail = s.pos_tail_estimate;
    if (neg_tail) *neg_tail = s.neg_tail_estimate;
    if (trace_norm_partials) {
      std::memcpy(trace_norm_partials, s.trace_norm_partials.data(),
                  sizeof(double) * s.trace_norm_partials.size());
    }
  });
}

mmds_status mmds_sphere_metric_identity(int d, int max_order,
                                        const double* angles, int n_angles,
                                        double* max_error) {
  if (auto st = require(angles && max_error && n_angles > 0, "bad arguments")) {
    return st;
  }
  return guarded([&] {
    *max_error = mmds::oracle::sphere_metric_identity_check(
        d, max_order, std::span<const double>(angles, n_angles));
  });
}

/* ---- couplings and stability ---- */

mmds_status mmds_coupling_product(const mmds_space* x, const mmds_space* y,
                                  mmds_coupling** out) {
  if (auto st = require(x && y && out, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_coupling{mmds::product_coupling(x->impl, y->impl)};
  });
}

mmds_status mmds_coupling_permutation(const mmds_space* x, const mmds_space* y,
                                      const int* perm, mmds_coupling** out) {
  if (auto st = require(x && y && perm && out, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_coupling{mmds::permutation_coupling(
        x->impl, y->impl, std::span<const int>(perm, x->impl.size()))};
  });
}

int mmds_coupling_rows(const mmds_coupling* c) {
  return c ? static_cast<int>(c->impl.joint.rows()) : 0;
}
int mmds_coupling_cols(const mmds_coupling* c) {
  return c ? static_cast<int>(c->impl.joint.cols()) : 0;
}

mmds_status mmds_coupling_values(const mmds_coupling* c, double* buf) {
  if (auto st = require(c && buf, "bad arguments")) return st;
  copy_rowmajor(c->impl.joint, buf);
  return MMDS_OK;
}

void mmds_coupling_free(mmds_coupling* c) { delete c; }

mmds_status mmds_gw_cost(const mmds_space* x, const mmds_space* y,
                         const mmds_coupling* c, double p, double* out) {
  if (auto st = require(x && y && c && out, "bad arguments")) return st;
  return guarded([&] { *out = mmds::gw_cost(x->impl, y->impl, c->impl, p); });
}

mmds_status mmds_gw_upper_bound(const mmds_space* x, const mmds_space* y,
                                int strategy, int threads, double* cost,
                                int* perm_out) {
  if (auto st = require(x && y && cost, "bad arguments")) return st;
  return guarded([&] {
    const auto res = mmds::gw_upper_bound(
        x->impl, y->impl,
        strategy == MMDS_GW_ENUMERATE ? mmds::GwStrategy::enumerate
                                      : mmds::GwStrategy::product,
        threads);
    *cost = res.cost;
    if (perm_out && !res.perm.empty()) {
      std::memcpy(perm_out, res.perm.data(), sizeof(int) * res.perm.size());
    }
  });
}

mmds_status mmds_kernel_gap_check(const mmds_space* x, const mmds_space* y,
                                  const mmds_coupling* c, double* lhs,
                                  double* rhs, int* holds) {
  if (auto st = require(x && y && c && lhs && rhs && holds, "bad arguments")) {
    return st;
  }
  return guarded([&] {
    const auto res = mmds::kernel_gap_bound_check(x->impl, y->impl, c->impl);
    *lhs = res.lhs_kernel_gap;
    *rhs = res.rhs_bound;
    *holds = res.holds ? 1 : 0;
  });
}

mmds_status mmds_projection_stability_check(const mmds_space* x,
                                            const mmds_space* y,
                                            const mmds_coupling* c,
                                            double* projected_gap,
                                            double* raw_gap, int* holds) {
  if (auto st =
          require(x && y && c && projected_gap && raw_gap && holds, "bad arguments")) {
    return st;
  }
  return guarded([&] {
    const auto res = mmds::projection_stability_check(x->impl, y->impl, c->impl);
    *projected_gap = res.projected_gap;
    *raw_gap = res.raw_gap;
    *holds = res.holds ? 1 : 0;
  });
}

/* ---- consistency ---- */

mmds_status mmds_consistency_run(int target, int d, const int* sizes,
                                 int n_sizes, uint64_t seed, int top_k,
                                 mmds_table** out) {
  if (auto st = require(sizes && out && n_sizes > 0, "bad arguments")) return st;
  return guarded([&] {
    *out = new mmds_table{mmds::consistency_experiment(
        target == MMDS_TARGET_CIRCLE ? mmds::ConsistencyTarget::circle
                                     : mmds::ConsistencyTarget::sphere,
        d, std::span<const int>(sizes, n_sizes), seed, top_k)};
  });
}

int mmds_table_rows(const mmds_table* t) {
  return t ? static_cast<int>(t->impl.rows.size()) : 0;
}
int mmds_table_cols(const mmds_table* t) {
  return t ? static_cast<int>(t->impl.columns.size()) : 0;
}
const char* mmds_table_column_name(const mmds_table* t, int col) {
  if (!t || col < 0 || col >= mmds_table_cols(t)) return "";
  return t->impl.columns[col].c_str();
}
double mmds_table_value(const mmds_table* t, int row, int col) {
  if (!t || row < 0 || row >= mmds_table_rows(t) || col < 0 ||
      col >= mmds_table_cols(t)) {
    return 0.0;
  }
  return t->impl.rows[row][col];
}
void mmds_table_free(mmds_table* t) { delete t; }

}  // extern "C"
