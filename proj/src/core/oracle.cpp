#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/special.hpp"

namespace mmds::oracle {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

long double log_sphere_area(int d) {
  return std::log(2.0L) + 0.5L * d * std::log(kPi) - lgammal(0.5L * d);
}

// ln(n!!) for odd n
long double log_double_factorial_odd(int n) {
  return lgammal(n + 1.0L) - 0.5L * (n - 1) * std::log(2.0L) -
         lgammal(0.5L * (n + 1));
}

// Batched Funk-Hecke quadrature: integrals
//   I_n = int_0^pi P_{n,d}(cos t) g(t) sin^{d-2} t dt,  n = 0..nmax
// evaluated with a single recurrence sweep per node, doubling the rule until
// every order stabilizes.
std::vector<long double> funk_hecke_integrals(
    int d, int nmax, const std::function<long double(long double)>& g,
    double rel_tol = 1e-13, int max_order = 4096) {
  std::vector<long double> prev(nmax + 1, 0.0L), cur(nmax + 1, 0.0L);
  std::vector<long double> p(nmax + 1);
  const long double half_pi = kPi / 2.0L;
  long double l1 = 0.0L;
  bool have_prev = false;
  for (int order = 32; order <= max_order; order *= 2) {
    const auto& rule = special::gauss_legendre(order);
    std::fill(cur.begin(), cur.end(), 0.0L);
    l1 = 0.0L;
    for (int i = 0; i < order; ++i) {
      const long double theta = half_pi + half_pi * rule.nodes[i];
      long double c = rule.weights[i] * g(theta);
      for (int e = 0; e < d - 2; ++e) c *= std::sin(theta);
      l1 += std::abs(c);
      special::legendre_all(nmax, d, std::cos(theta), p.data());
      for (int n = 0; n <= nmax; ++n) cur[n] += c * p[n];
    }
    if (have_prev) {
      bool ok = true;
      for (int n = 0; n <= nmax && ok; ++n) {
        ok = std::abs(cur[n] - prev[n]) <= rel_tol * (std::abs(cur[n]) + l1);
      }
      if (ok) {
        for (auto& v : cur) v *= half_pi;
        return cur;
      }
    }
    prev = cur;
    have_prev = true;
  }
  fail(ErrorCode::no_convergence,
       "Funk-Hecke quadrature did not stabilize by " +
           std::to_string(max_order) + " nodes (d=" + std::to_string(d) +
           ", nmax=" + std::to_string(nmax) + ")");
}

// |S^{d-2}| / |S^{d-1}|
long double area_ratio(int d) {
  return std::exp(log_sphere_area(d - 1) - log_sphere_area(d));
}

std::vector<long double> sphere_lambdas(int d, int nmax) {
  auto integrals = funk_hecke_integrals(
      d, nmax, [](long double t) { return t * t; });
  const long double r = area_ratio(d);
  std::vector<long double> out(nmax + 1);
  for (int n = 0; n <= nmax; ++n) out[n] = -0.5L * r * integrals[n];
  return out;
}

}  // namespace

OracleSpectrum circle_spectrum(int max_order) {
  if (max_order < 1) fail(ErrorCode::bad_argument, "max_order must be >= 1");
  OracleSpectrum s;
  s.space = "circle";
  s.truncation_order = max_order;
  s.entries.push_back({0, 0.0, 1});
  long double partial = 0.0L;
  for (int n = 1; n <= max_order; ++n) {
    const double v = (n % 2 == 1 ? 1.0 : -1.0) / (static_cast<double>(n) * n);
    s.entries.push_back({n, v, 2});
    partial += 1.0L / (static_cast<long double>(n) * n);
  }
  // exact 1/n^2 tail
  s.tail_abs_estimate =
      static_cast<double>(2.0L * (kPi * kPi / 6.0L - partial));
  s.kernel_dim_one = true;
  return s;
}

OracleSpectrum sphere_spectrum(int d, int max_order) {
  if (d < 3) fail(ErrorCode::bad_argument, "sphere_spectrum needs d >= 3");
  if (max_order < 1) fail(ErrorCode::bad_argument, "max_order must be >= 1");
  auto lam = sphere_lambdas(d, max_order);
  OracleSpectrum s;
  s.space = "sphere";
  s.truncation_order = max_order;
  s.entries.push_back({0, 0.0, 1});
  for (int n = 1; n <= max_order; ++n) {
    s.entries.push_back(
        {n, static_cast<double>(lam[n]), special::harmonic_dim(n, d)});
  }
  s.tail_abs_estimate = power_law_tail(s.entries, max_order, -1);
  s.kernel_dim_one = true;
  return s;
}

double polygon_eigenvalue(int m, int k) {
  const int n = 4 * m + 2;
  if (m < 1 || k < 1 || k > n - 1) {
    fail(ErrorCode::bad_argument, "polygon_eigenvalue wants m >= 1, 1 <= k <= 4m+1");
  }
  const double step = 2.0 * M_PI / n;
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  const double s = std::sin(M_PI * k / n);
  return step * step * sign * n / (4.0 * s * s);
}

double polygon_negative_trace(int m) {
  const double c = M_PI / (2 * m + 1);
  return c * c * m * (m + 1.0) * (4 * m + 2) / 3.0;
}

OracleSpectrum polygon_spectrum(int m) {
  if (m < 1) fail(ErrorCode::bad_argument, "polygon_spectrum needs m >= 1");
  const int n = 4 * m + 2;
  OracleSpectrum s;
  s.space = "polygon";
  s.truncation_order = n - 1;
  s.entries.push_back({0, 0.0, 1});
  for (int k = 1; k <= n - 1; ++k) {
    s.entries.push_back({k, polygon_eigenvalue(m, k), 1});
  }
  s.kernel_dim_one = true;
  return s;
}

OracleSpectrum paley_spectrum(int q, Mode mode) {
  if (q < 5 || q % 4 != 1) {
    fail(ErrorCode::invalid_spec, "invalid Paley order " + std::to_string(q));
  }
  const double scale = mode == Mode::matrix ? 1.0 : 1.0 / q;
  const double root = std::sqrt(static_cast<double>(q));
  OracleSpectrum s;
  s.space = "paley";
  s.truncation_order = 2;
  s.entries.push_back({0, 0.0, 1});
  s.entries.push_back({1, scale * (5.0 + 3.0 * root) / 4.0, (q - 1) / 2});
  s.entries.push_back({2, scale * (5.0 - 3.0 * root) / 4.0, (q - 1) / 2});
  s.kernel_dim_one = true;
  return s;
}

OracleSpectrum torus_spectrum(int n_factors, int max_order) {
  if (n_factors < 1) fail(ErrorCode::bad_argument, "torus needs N >= 1");
  OracleSpectrum s = circle_spectrum(max_order);
  s.space = "torus";
  for (auto& e : s.entries) {
    if (e.order > 0) e.multiplicity *= n_factors;
  }
  s.tail_abs_estimate *= n_factors;
  s.kernel_dim_one = n_factors == 1;
  return s;
}

OracleSpectrum product_spectrum(const OracleSpectrum& a,
                                const OracleSpectrum& b) {
  if (!a.kernel_dim_one || !b.kernel_dim_one) {
    fail(ErrorCode::kernel_assumption_unmet,
         "product spectrum requires factors with one-dimensional kernel");
  }
  OracleSpectrum s;
  s.space = a.space + "x" + b.space;
  s.truncation_order = std::max(a.truncation_order, b.truncation_order);
  s.entries.push_back({0, 0.0, 1});
  for (const auto& e : a.entries) {
    if (e.value != 0.0) s.entries.push_back(e);
  }
  for (const auto& e : b.entries) {
    if (e.value != 0.0) s.entries.push_back(e);
  }
  std::stable_sort(s.entries.begin() + 1, s.entries.end(),
                   [](const auto& x, const auto& y) { return x.order < y.order; });
  s.tail_abs_estimate = a.tail_abs_estimate + b.tail_abs_estimate;
  // nonzero x nonzero eigenfunction pairs land in the product's kernel
  s.kernel_dim_one = false;
  return s;
}

OracleSpectrum oracle_from_spectrum(const Spectrum& sp, const std::string& name) {
  OracleSpectrum s;
  s.space = name;
  const int n = sp.size();
  s.truncation_order = n;
  int zero_count = 0;
  int order = 1;
  for (int i = 0; i < n; ++i) {
    const double v = sp.eigenvalues(i);
    if (std::abs(v) <= sp.zero_tol) {
      ++zero_count;
    } else {
      s.entries.push_back({order++, v, 1});
    }
  }
  s.entries.insert(s.entries.begin(), {0, 0.0, std::max(zero_count, 1)});
  s.kernel_dim_one = zero_count == 1;
  return s;
}

AnalyticEigenvalue sphere_eigenvalue(int n, int d, EvalMethod method) {
  if (n < 1 || d < 3) fail(ErrorCode::bad_argument, "sphere_eigenvalue needs n >= 1, d >= 3");
  const long long mult = special::harmonic_dim(n, d);
  if (method == EvalMethod::closed_form) {
    if (n % 2 == 0) {
      fail(ErrorCode::parity, "closed form covers odd orders only");
    }
    const long double lg = 0.5L * (d + 1) * std::log(kPi) +
                           log_double_factorial_odd(n) + lgammal(0.5L * d) +
                           lgammal(0.5L * n) - std::log(static_cast<long double>(n)) -
                           0.5L * (n + 1) * std::log(2.0L) -
                           2.0L * lgammal(0.5L * (n + d)) - log_sphere_area(d);
    return {n, static_cast<double>(std::exp(lg)), mult};
  }
  auto lam = sphere_lambdas(d, n);
  return {n, static_cast<double>(lam[n]), mult};
}

AnalyticEigenvalue sphere_eta(int n, int d, EvalMethod method) {
  if (n < 0 || d < 3) fail(ErrorCode::bad_argument, "sphere_eta needs n >= 0, d >= 3");
  const long long mult = special::harmonic_dim(n, d);
  if (method == EvalMethod::closed_form) {
    if (n % 2 == 0 || n < 1) {
      fail(ErrorCode::parity, "closed form covers odd orders only");
    }
    const long double lg = 0.5L * (d - 1) * std::log(kPi) +
                           log_double_factorial_odd(n) + lgammal(0.5L * d) +
                           lgammal(0.5L * n) - std::log(static_cast<long double>(n)) -
                           0.5L * (n - 1) * std::log(2.0L) -
                           2.0L * lgammal(0.5L * (n + d)) - log_sphere_area(d);
    return {n, static_cast<double>(-std::exp(lg)), mult};
  }
  auto integrals = funk_hecke_integrals(
      d, n, [](long double t) { return t; });
  return {n, static_cast<double>(area_ratio(d) * integrals[n]), mult};
}

AnalyticEigenvalue s2_transform_eigenvalue(
    int n, const std::function<double(double)>& profile) {
  if (n < 1) fail(ErrorCode::bad_argument, "transform order must be >= 1");
  auto integrals = funk_hecke_integrals(3, n, [&](long double theta) {
    const double f = profile(static_cast<double>(std::cos(theta)));
    return static_cast<long double>(f) * f;
  });
  // -(|S^1| / 2|S^2|) = -1/4 against the t-integral
  return {n, static_cast<double>(-0.25L * integrals[n]),
          special::harmonic_dim(n, 3)};
}

namespace {

std::function<long double(long double)> profile_sq_theta(S2Profile profile) {
  if (profile == S2Profile::geodesic) {
    return [](long double theta) { return theta * theta; };
  }
  // f(t) = (2-2t)^{1/4}; f^2(cos theta) = 2 sin(theta/2)
  return [](long double theta) { return 2.0L * std::sin(theta / 2.0L); };
}

}  // namespace

AnalyticEigenvalue s2_transform_eigenvalue(int n, S2Profile profile) {
  if (n < 1) fail(ErrorCode::bad_argument, "transform order must be >= 1");
  auto integrals = funk_hecke_integrals(3, n, profile_sq_theta(profile));
  // -(|S^1| / 2|S^2|) = -1/4 against the t-integral
  return {n, static_cast<double>(-0.25L * integrals[n]),
          special::harmonic_dim(n, 3)};
}

OracleSpectrum s2_transform_spectrum(S2Profile profile, int max_order) {
  if (max_order < 1) fail(ErrorCode::bad_argument, "max_order must be >= 1");
  auto integrals = funk_hecke_integrals(3, max_order, profile_sq_theta(profile));
  OracleSpectrum s;
  s.space = profile == S2Profile::geodesic ? "s2f-geodesic" : "s2f-sqrt-euclidean";
  s.truncation_order = max_order;
  s.entries.push_back({0, 0.0, 1});
  for (int n = 1; n <= max_order; ++n) {
    s.entries.push_back(
        {n, static_cast<double>(-0.25L * integrals[n]), 2LL * n + 1});
  }
  s.tail_abs_estimate = power_law_tail(s.entries, max_order, -1);
  s.kernel_dim_one = true;
  return s;
}

SphereSummaries sphere_summaries(int d, int max_order) {
  if (d < 3) fail(ErrorCode::bad_argument, "sphere_summaries needs d >= 3");
  auto lam = sphere_lambdas(d, max_order);
  const long double diam2_sq =
      area_ratio(d) *
      funk_hecke_integrals(d, 0, [](long double t) { return t * t; })[0];

  SphereSummaries out;
  out.diam2_sq = static_cast<double>(diam2_sq);
  out.trace = 0.5 * out.diam2_sq;
  out.neg_trace_identity = static_cast<double>(kPi * kPi / 4.0L) - out.trace;

  std::vector<AnalyticEigenvalue> entries;
  entries.push_back({0, 0.0, 1});
  long double pos = 0.0L, neg = 0.0L, tn = 0.0L;
  out.trace_norm_partials.resize(max_order);
  for (int n = 1; n <= max_order; ++n) {
    const long long mult = special::harmonic_dim(n, d);
    entries.push_back({n, static_cast<double>(lam[n]), mult});
    const long double contrib = std::abs(lam[n]) * mult;
    tn += contrib;
    if (n % 2 == 1) {
      pos += lam[n] * mult;
    } else {
      neg += contrib;
    }
    out.trace_norm_partials[n - 1] = static_cast<double>(tn);
  }
  out.pos_sum = static_cast<double>(pos);
  out.neg_trace_partial = static_cast<double>(neg);
  out.pos_tail_estimate = power_law_tail(entries, max_order, 1);
  out.neg_tail_estimate = power_law_tail(entries, max_order, 0);
  return out;
}

double sphere_metric_identity_check(int d, int max_order,
                                    std::span<const double> angles) {
  if (d < 2) fail(ErrorCode::bad_argument, "metric identity needs d >= 2");
  for (double g : angles) {
    if (g < 0.0 || g > M_PI + 1e-12) {
      fail(ErrorCode::bad_argument, "angles must lie in [0, pi]");
    }
  }

  if (d == 2) {
    // ||Phi(0) - Phi(gamma)||^2 from the cos/sin eigenfunctions:
    // sum over odd n of (4/n^2) (1 - cos(n gamma)).
    double worst = 0.0;
    for (double g : angles) {
      long double acc = 0.0L;
      for (int n = 1; n <= max_order; n += 2) {
        acc += 4.0L / (static_cast<long double>(n) * n) *
               (1.0L - std::cos(static_cast<long double>(n) * g));
      }
      worst = std::max(worst, std::abs(static_cast<double>(acc) - M_PI * g));
    }
    return worst;
  }

  auto lam = sphere_lambdas(d, max_order);
  std::vector<AnalyticEigenvalue> entries;
  std::vector<long double> lam_mult(max_order + 1, 0.0L);
  entries.push_back({0, 0.0, 1});
  for (int n = 1; n <= max_order; ++n) {
    const long long mult = special::harmonic_dim(n, d);
    lam_mult[n] = lam[n] * mult;
    entries.push_back({n, static_cast<double>(lam[n]), mult});
  }
  // Tail of the odd series beyond the truncation, from the |lambda|*N decay;
  // modulated by the last Legendre factor so it vanishes at gamma = 0 and
  // doubles at gamma = pi like the true remainder terms.
  const double tail = power_law_tail(entries, max_order, 1);
  const int n_last = max_order % 2 == 1 ? max_order : max_order - 1;

  double worst = 0.0;
  std::vector<long double> p(max_order + 1);
  for (double g : angles) {
    special::legendre_all(max_order, d, std::cos(static_cast<long double>(g)),
                          p.data());
    long double acc = 0.0L;
    for (int n = 1; n <= max_order; n += 2) {
      acc += 2.0L * lam_mult[n] * (1.0L - p[n]);
    }
    acc += 2.0L * tail * (1.0L - p[n_last]);
    worst = std::max(worst, std::abs(static_cast<double>(acc) - M_PI * g));
  }
  return worst;
}

double positive_sum(const OracleSpectrum& s) {
  long double acc = 0.0L;
  for (const auto& e : s.entries) {
    if (e.value > 0.0) acc += static_cast<long double>(e.value) * e.multiplicity;
  }
  return static_cast<double>(acc);
}

double negative_sum(const OracleSpectrum& s) {
  long double acc = 0.0L;
  for (const auto& e : s.entries) {
    if (e.value < 0.0) acc -= static_cast<long double>(e.value) * e.multiplicity;
  }
  return static_cast<double>(acc);
}

double trace_norm(const OracleSpectrum& s) {
  long double acc = 0.0L;
  for (const auto& e : s.entries) {
    acc += std::abs(static_cast<long double>(e.value)) * e.multiplicity;
  }
  return static_cast<double>(acc);
}

double power_law_tail(std::span<const AnalyticEigenvalue> entries,
                      int from_exclusive, int parity) {
  std::vector<std::pair<double, double>> pts;  // (ln n, ln |lam|*mult)
  for (auto it = entries.rbegin(); it != entries.rend() && pts.size() < 10; ++it) {
    if (it->order <= 0 || it->order > from_exclusive) continue;
    if (parity >= 0 && it->order % 2 != parity) continue;
    const double a = std::abs(it->value) * it->multiplicity;
    if (a <= 0.0) continue;
    pts.emplace_back(std::log(static_cast<double>(it->order)), std::log(a));
  }
  if (pts.size() < 3) return 0.0;
  double mx = 0, my = 0;
  for (auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double p = -sxy / sxx;
  if (!(p > 1.05)) return 0.0;  // no convergent extrapolation
  const double c = std::exp(my + p * mx);
  // Euler-Maclaurin leading term; halve for a single parity class.
  const double whole = c * std::pow(static_cast<double>(from_exclusive), 1.0 - p) / (p - 1.0);
  return parity >= 0 ? 0.5 * whole : whole;
}

}  // namespace mmds::oracle
