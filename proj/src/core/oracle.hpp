#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/spectral.hpp"
#include "core/types.hpp"

namespace mmds::oracle {

struct AnalyticEigenvalue {
  int order;
  double value;
  long long multiplicity;
};

struct OracleSpectrum {
  std::string space;
  std::vector<AnalyticEigenvalue> entries;  // sorted by order, zero included
  int truncation_order = 0;
  // Estimated sum of |value|*multiplicity beyond the truncation (0 for
  // finite spectra). Reported separately, never folded into entries.
  double tail_abs_estimate = 0.0;
  bool kernel_dim_one = true;
};

enum class EvalMethod { quadrature, closed_form };
enum class S2Profile { geodesic, sqrt_euclidean };

// S^1: eigenvalue (-1)^{n+1}/n^2 with multiplicity 2 for n = 1..max_order.
OracleSpectrum circle_spectrum(int max_order);

// S^{d-1}, d >= 3: lambda_{n,d} with multiplicity N_{n,d}, all orders up to
// max_order by Funk-Hecke quadrature.
OracleSpectrum sphere_spectrum(int d, int max_order);

// Vertices of the regular (4m+2)-gon: matrix-mode circulant eigenvalues from
// the closed form.
OracleSpectrum polygon_spectrum(int m);
double polygon_eigenvalue(int m, int k);
double polygon_negative_trace(int m);

OracleSpectrum paley_spectrum(int q, Mode mode);

// Flat torus (S^1)^N truncation.
OracleSpectrum torus_spectrum(int n_factors, int max_order);

// Nonzero spectrum of a product from its factors; both factors must assert a
// one-dimensional kernel.
OracleSpectrum product_spectrum(const OracleSpectrum& a,
                                const OracleSpectrum& b);
OracleSpectrum oracle_from_spectrum(const Spectrum& s, const std::string& name);

AnalyticEigenvalue sphere_eigenvalue(int n, int d, EvalMethod method);
AnalyticEigenvalue sphere_eta(int n, int d, EvalMethod method);

// Metric transforms of S^2: eigenvalue of the kernel for d_f(u,v) =
// f(<u,v>).
AnalyticEigenvalue s2_transform_eigenvalue(int n, S2Profile profile);
AnalyticEigenvalue s2_transform_eigenvalue(
    int n, const std::function<double(double)>& profile);
OracleSpectrum s2_transform_spectrum(S2Profile profile, int max_order);

struct SphereSummaries {
  double pos_sum;            // sum over odd n <= max_order of lambda * N
  double trace;              // 0.5 * diam2_sq
  double neg_trace_identity; // pi^2/4 - trace
  double neg_trace_partial;  // sum over even n <= max_order of |lambda| * N
  double diam2_sq;
  std::vector<double> trace_norm_partials;  // partials[k-1] = sum_{n<=k} |lambda_n| N_n
  double pos_tail_estimate;  // fitted tail of the odd-order series
  double neg_tail_estimate;  // fitted tail of the even-order series
};

SphereSummaries sphere_summaries(int d, int max_order);

// max_{angles} | ||Phi(u)-Phi(v)||^2 - pi*gamma | with the embedded squared
// distance evaluated from the truncated eigenfunction series (explicit
// cos/sin for d = 2, the Legendre addition-theorem form for d >= 3, with the
// series tail beyond the truncation estimated from the |lambda|*N decay).
double sphere_metric_identity_check(int d, int max_order,
                                    std::span<const double> angles);

double positive_sum(const OracleSpectrum& s);
double negative_sum(const OracleSpectrum& s);  // sum of |value|*mult, value < 0
double trace_norm(const OracleSpectrum& s);

// Least-squares power-law fit C n^{-p} on the last (up to) 10 terms of
// |value|*multiplicity, extrapolated beyond from_exclusive. parity: -1 all
// orders, 0 even only, 1 odd only.
double power_law_tail(std::span<const AnalyticEigenvalue> entries,
                      int from_exclusive, int parity);

}  // namespace mmds::oracle
