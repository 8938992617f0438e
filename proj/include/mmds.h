/* mmds: generalized classical multidimensional scaling on finite metric
 * measure spaces.
 *
 * C interface over the C++ core. All objects are opaque handles created by
 * mmds_*_create/load/generate functions and released with the matching
 * mmds_*_free. Functions return MMDS_OK on success; on failure they return a
 * status code and leave a human-readable message in mmds_last_error()
 * (thread-local). Output buffers are caller-allocated; sizes are documented
 * per function.
 */

#ifndef MMDS_H
#define MMDS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmds_status {
  MMDS_OK = 0,
  MMDS_ERR_PARSE = 1,
  MMDS_ERR_METRIC = 2,           /* symmetry/triangle/diagonal violation */
  MMDS_ERR_WEIGHT = 3,
  MMDS_ERR_DISCONNECTED = 4,
  MMDS_ERR_INVALID_SPEC = 5,
  MMDS_ERR_NOT_HOMOGENEOUS = 6,
  MMDS_ERR_CONVERGENCE = 7,
  MMDS_ERR_RANK = 8,
  MMDS_ERR_DIMENSION = 9,
  MMDS_ERR_MODE = 10,
  MMDS_ERR_DOMAIN = 11,
  MMDS_ERR_OVERFLOW = 12,
  MMDS_ERR_PARITY = 13,
  MMDS_ERR_NO_CONVERGENCE = 14,
  MMDS_ERR_MARGINAL = 15,
  MMDS_ERR_TOO_LARGE = 16,
  MMDS_ERR_KERNEL_ASSUMPTION = 17,
  MMDS_ERR_BAD_ARGUMENT = 18,
  MMDS_ERR_IO = 19,
} mmds_status;

typedef enum mmds_mode {
  MMDS_MODE_MATRIX = 0,  /* classical uniform-1/n centering */
  MMDS_MODE_MEASURE = 1, /* operator convention on L^2(mu) */
} mmds_mode;

typedef struct mmds_space mmds_space;
typedef struct mmds_cloud mmds_cloud;
typedef struct mmds_kernel mmds_kernel;
typedef struct mmds_spectrum mmds_spectrum;
typedef struct mmds_embedding mmds_embedding;
typedef struct mmds_oracle mmds_oracle;
typedef struct mmds_coupling mmds_coupling;
typedef struct mmds_table mmds_table;

const char* mmds_version(void);
/* Message for the last failing call on this thread ("" if none). */
const char* mmds_last_error(void);

/* ---- finite metric measure spaces ---- */

/* dist is n*n row-major; weights may be NULL (uniform) or any positive
 * vector (normalized to sum 1). */
mmds_status mmds_space_create(int n, const double* dist, const double* weights,
                              mmds_space** out);
/* CSV distance matrix (optional label header row); weights_path may be NULL. */
mmds_status mmds_space_load_csv(const char* path, const char* weights_path,
                                mmds_space** out);
/* Edge list "i j length" -> shortest-path metric. */
mmds_status mmds_space_load_edges(const char* path, const char* weights_path,
                                  mmds_space** out);

mmds_status mmds_space_polygon(int n, mmds_space** out);
mmds_status mmds_space_paley(int q, mmds_space** out);
mmds_status mmds_space_sphere_sample(int d, int n, uint64_t seed,
                                     mmds_space** out);
mmds_status mmds_space_torus_grid(int n_factors, int n_per_factor,
                                  mmds_space** out);
mmds_status mmds_space_glued_paley(const int* qs, int count, mmds_space** out);
mmds_status mmds_space_random_metric(int n, uint64_t seed, mmds_space** out);
mmds_status mmds_space_product(const mmds_space* x, const mmds_space* y,
                               mmds_space** out);

int mmds_space_size(const mmds_space* s);
mmds_status mmds_space_distances(const mmds_space* s, double* buf /* n*n */);
mmds_status mmds_space_weights(const mmds_space* s, double* buf /* n */);
mmds_status mmds_space_diam(const mmds_space* s, double p, double* out);
/* Schoenberg test on the matrix-mode kernel; tol < 0 selects 1e-9. */
mmds_status mmds_space_is_euclidean(const mmds_space* s, double tol,
                                    int* embeddable, double* min_eigenvalue);
void mmds_space_free(mmds_space* s);

/* ---- Euclidean point clouds ---- */

mmds_status mmds_cloud_create(int n, int k, const double* points,
                              const double* weights, mmds_cloud** out);
mmds_status mmds_cloud_load_csv(const char* path, const char* weights_path,
                                mmds_cloud** out);
mmds_status mmds_cloud_ellipse(double a, double b, int n, uint64_t seed,
                               mmds_cloud** out);
int mmds_cloud_size(const mmds_cloud* c);
int mmds_cloud_dim(const mmds_cloud* c);
mmds_status mmds_cloud_points(const mmds_cloud* c, double* buf /* n*k */);
mmds_status mmds_cloud_thickness(const mmds_cloud* c, double* out);
/* Weighted covariance spectrum, descending, k entries. */
mmds_status mmds_cloud_covariance_eigenvalues(const mmds_cloud* c, double* buf);
mmds_status mmds_cloud_to_space(const mmds_cloud* c, mmds_space** out);
void mmds_cloud_free(mmds_cloud* c);

/* ---- centered kernels ---- */

mmds_status mmds_kernel_centered(const mmds_space* s, mmds_mode mode,
                                 mmds_kernel** out);
mmds_status mmds_kernel_two_point_homogeneous(const mmds_space* s,
                                              mmds_kernel** out);
/* Nearest-PSD projection; rank_bound <= 0 keeps every positive eigenvalue. */
mmds_status mmds_kernel_psd_project(const mmds_kernel* k, int rank_bound,
                                    mmds_kernel** out);
int mmds_kernel_size(const mmds_kernel* k);
mmds_status mmds_kernel_values(const mmds_kernel* k, double* buf /* n*n */);
void mmds_kernel_free(mmds_kernel* k);

/* ---- spectra ---- */

/* zero_tol < 0 selects the default 1e-9 * max(1, lambda_max). */
mmds_status mmds_spectrum_compute(const mmds_kernel* k, double zero_tol,
                                  mmds_spectrum** out);
int mmds_spectrum_size(const mmds_spectrum* s);
int mmds_spectrum_pr(const mmds_spectrum* s);
int mmds_spectrum_nr(const mmds_spectrum* s);
double mmds_spectrum_zero_tol(const mmds_spectrum* s);
/* Descending eigenvalues, n entries. */
mmds_status mmds_spectrum_eigenvalues(const mmds_spectrum* s, double* buf);
/* Row-major n*n; buf[i*n + m] = phi_m(x_i). */
mmds_status mmds_spectrum_eigenfunctions(const mmds_spectrum* s, double* buf);
mmds_status mmds_spectrum_trace_norm(const mmds_spectrum* s, double* out);
mmds_status mmds_spectrum_negative_trace(const mmds_spectrum* s, double* out);
void mmds_spectrum_free(mmds_spectrum* s);

/* ---- embeddings ---- */

mmds_status mmds_embedding_create(const mmds_spectrum* s, int k,
                                  mmds_embedding** out);
int mmds_embedding_rows(const mmds_embedding* e);
int mmds_embedding_dim(const mmds_embedding* e);
mmds_status mmds_embedding_coords(const mmds_embedding* e, double* buf /* n*k */);
mmds_status mmds_embedding_distances(const mmds_embedding* e, double* buf /* n*n */);
mmds_status mmds_embedding_distortion(const mmds_space* s,
                                      const mmds_embedding* e, double* out);
mmds_status mmds_embedding_linf_check(const mmds_space* s,
                                      const mmds_embedding* e,
                                      double* max_excess, double* bound,
                                      int* holds);
void mmds_embedding_free(mmds_embedding* e);

/* ---- special functions ---- */

mmds_status mmds_legendre(int n, int d, double t, double* out);
mmds_status mmds_harmonic_dim(int n, int d, long long* out);
mmds_status mmds_sphere_area(int d, double* out);

/* ---- analytic spectra ---- */

#define MMDS_METHOD_QUADRATURE 0
#define MMDS_METHOD_CLOSED_FORM 1
#define MMDS_S2F_GEODESIC 0
#define MMDS_S2F_SQRT_EUCLIDEAN 1

mmds_status mmds_oracle_circle(int max_order, mmds_oracle** out);
mmds_status mmds_oracle_sphere(int d, int max_order, mmds_oracle** out);
mmds_status mmds_oracle_polygon(int m, mmds_oracle** out);
mmds_status mmds_oracle_paley(int q, mmds_mode mode, mmds_oracle** out);
mmds_status mmds_oracle_torus(int n_factors, int max_order, mmds_oracle** out);
mmds_status mmds_oracle_s2_transform(int profile, int max_order,
                                     mmds_oracle** out);
mmds_status mmds_oracle_product(const mmds_oracle* a, const mmds_oracle* b,
                                mmds_oracle** out);
int mmds_oracle_entry_count(const mmds_oracle* o);
/* Parallel arrays of length entry_count; any pointer may be NULL. */
mmds_status mmds_oracle_entries(const mmds_oracle* o, int* orders,
                                double* values, long long* multiplicities);
int mmds_oracle_truncation_order(const mmds_oracle* o);
double mmds_oracle_tail_estimate(const mmds_oracle* o);
double mmds_oracle_positive_sum(const mmds_oracle* o);
double mmds_oracle_negative_sum(const mmds_oracle* o);
double mmds_oracle_trace_norm(const mmds_oracle* o);
void mmds_oracle_free(mmds_oracle* o);

mmds_status mmds_sphere_eigenvalue(int n, int d, int method, double* value,
                                   long long* multiplicity);
mmds_status mmds_sphere_eta(int n, int d, int method, double* value,
                            long long* multiplicity);
mmds_status mmds_s2_transform_eigenvalue(int n, int profile, double* value,
                                         long long* multiplicity);

/* pos_sum over odd orders, trace = diam2_sq/2, negative trace via the pi^2/4
 * identity and as the even-order partial sum, plus fitted tails of both
 * parity series. trace_norm_partials (length max_order) may be NULL. */
mmds_status mmds_sphere_summaries(int d, int max_order, double* pos_sum,
                                  double* trace, double* neg_trace_identity,
                                  double* neg_trace_partial, double* diam2_sq,
                                  double* pos_tail, double* neg_tail,
                                  double* trace_norm_partials);
mmds_status mmds_sphere_metric_identity(int d, int max_order,
                                        const double* angles, int n_angles,
                                        double* max_error);

/* ---- couplings and stability checks ---- */

mmds_status mmds_coupling_product(const mmds_space* x, const mmds_space* y,
                                  mmds_coupling** out);
mmds_status mmds_coupling_permutation(const mmds_space* x, const mmds_space* y,
                                      const int* perm, mmds_coupling** out);
int mmds_coupling_rows(const mmds_coupling* c);
int mmds_coupling_cols(const mmds_coupling* c);
mmds_status mmds_coupling_values(const mmds_coupling* c, double* buf);
void mmds_coupling_free(mmds_coupling* c);

mmds_status mmds_gw_cost(const mmds_space* x, const mmds_space* y,
                         const mmds_coupling* c, double p, double* out);

#define MMDS_GW_ENUMERATE 0
#define MMDS_GW_PRODUCT 1

/* perm_out (length n) is ignored for the product strategy and may be NULL. */
mmds_status mmds_gw_upper_bound(const mmds_space* x, const mmds_space* y,
                                int strategy, int threads, double* cost,
                                int* perm_out);

mmds_status mmds_kernel_gap_check(const mmds_space* x, const mmds_space* y,
                                  const mmds_coupling* c, double* lhs,
                                  double* rhs, int* holds);
mmds_status mmds_projection_stability_check(const mmds_space* x,
                                            const mmds_space* y,
                                            const mmds_coupling* c,
                                            double* projected_gap,
                                            double* raw_gap, int* holds);

/* ---- consistency experiments ---- */

#define MMDS_TARGET_CIRCLE 0
#define MMDS_TARGET_SPHERE 1

mmds_status mmds_consistency_run(int target, int d, const int* sizes,
                                 int n_sizes, uint64_t seed, int top_k,
                                 mmds_table** out);
int mmds_table_rows(const mmds_table* t);
int mmds_table_cols(const mmds_table* t);
const char* mmds_table_column_name(const mmds_table* t, int col);
double mmds_table_value(const mmds_table* t, int row, int col);
void mmds_table_free(mmds_table* t);

#ifdef __cplusplus
}
#endif

#endif /* MMDS_H */
