#include "core/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "core/error.hpp"

namespace mmds::special {

namespace {

template <typename T>
T legendre_recurrence(int n, int d, T t) {
  if (n == 0) return T(1);
  T prev = T(1);
  T cur = t;
  for (int k = 1; k < n; ++k) {
    const T next = ((2 * k + d - 2) * t * cur - T(k) * prev) / T(k + d - 2);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double legendre(int n, int d, double t) {
  if (n < 0 || d < 3) fail(ErrorCode::bad_argument, "legendre needs n >= 0, d >= 3");
  if (std::abs(t) > 1.0 + 1e-14) {
    fail(ErrorCode::domain, "legendre argument outside [-1, 1]: " + std::to_string(t));
  }
  t = std::clamp(t, -1.0, 1.0);
  return static_cast<double>(legendre_recurrence<long double>(n, d, t));
}

void legendre_all(int nmax, int d, long double t, long double* out) {
  out[0] = 1.0L;
  if (nmax == 0) return;
  out[1] = t;
  for (int k = 1; k < nmax; ++k) {
    out[k + 1] = ((2 * k + d - 2) * t * out[k] - static_cast<long double>(k) * out[k - 1]) /
                 static_cast<long double>(k + d - 2);
  }
}

long long harmonic_dim(int n, int d) {
  if (n < 0 || d < 2) fail(ErrorCode::bad_argument, "harmonic_dim needs n >= 0, d >= 2");
  if (n == 0) return 1;
  // log-space range check first: direct factorials overflow near n = 171
  const double lg = std::log(static_cast<double>(2 * n + d - 2)) +
                    std::lgamma(static_cast<double>(n + d - 2)) -
                    std::lgamma(static_cast<double>(n + 1)) -
                    std::lgamma(static_cast<double>(d - 1));
  if (lg > 62.0 * std::log(2.0)) {
    fail(ErrorCode::overflow, "harmonic dimension exceeds integer range");
  }
  // exact value: (2n+d-2) C(n+d-3, d-3) / (d-2), with the usual
  // divide-as-you-go binomial so every intermediate stays integral
  if (d == 2) return 2;
  unsigned __int128 binom = 1;
  for (int i = 1; i <= d - 3; ++i) {
    binom = binom * static_cast<unsigned>(n + i) / static_cast<unsigned>(i);
  }
  const unsigned __int128 value =
      binom * static_cast<unsigned>(2 * n + d - 2) / static_cast<unsigned>(d - 2);
  return static_cast<long long>(value);
}

double sphere_area(int d) {
  if (d < 2) fail(ErrorCode::bad_argument, "sphere_area needs d >= 2");
  return std::exp(std::log(2.0) + 0.5 * d * std::log(M_PI) -
                  std::lgamma(0.5 * d));
}

namespace {

// Nodes by Newton iteration on P_n (d = 3 Legendre), standard initial guess.
QuadRule compute_rule(int order) {
  QuadRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    long double x = std::cos(M_PI * (i + 0.75L) / (order + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 1; k < order; ++k) {
        const long double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

std::mutex rule_mutex;
std::map<int, QuadRule> rule_cache;

}  // namespace

const QuadRule& gauss_legendre(int order) {
  if (order < 1) fail(ErrorCode::bad_argument, "quadrature order must be positive");
  std::lock_guard<std::mutex> lock(rule_mutex);
  auto it = rule_cache.find(order);
  if (it == rule_cache.end()) {
    it = rule_cache.emplace(order, compute_rule(order)).first;
  }
  return it->second;
}

namespace {

template <typename T, typename F>
void gl_pass(const QuadRule& rule, const F& f, T scale, T shift, T& integral,
             T& abs_integral) {
  T acc = 0, acc_abs = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const T v = static_cast<T>(rule.weights[i]) * f(shift + scale * static_cast<T>(rule.nodes[i]));
    acc += v;
    acc_abs += std::abs(v);
  }
  integral = scale * acc;
  abs_integral = scale * acc_abs;
}

template <typename T, typename F>
T adaptive(const F& f, T scale, T shift, double rel_tol, int max_order) {
  T prev, prev_abs;
  gl_pass(gauss_legendre(32), f, scale, shift, prev, prev_abs);
  T cur = prev;
  for (int order = 64; order <= max_order; order *= 2) {
    T cur_abs;
    gl_pass(gauss_legendre(order), f, scale, shift, cur, cur_abs);
    const T span = std::abs(cur) + cur_abs;
    if (std::abs(cur - prev) <= static_cast<T>(rel_tol) * span) return cur;
    if (order < max_order) prev = cur;
  }
  fail(ErrorCode::no_convergence,
       "quadrature did not converge at " + std::to_string(max_order) +
           " nodes; last two estimates " +
           std::to_string(static_cast<double>(prev)) + " and " +
           std::to_string(static_cast<double>(cur)));
}

}  // namespace

double integrate(const std::function<double(double)>& f, double rel_tol,
                 int max_order) {
  return adaptive<double>(f, 1.0, 0.0, rel_tol, max_order);
}

long double integrate_theta(const std::function<long double(long double)>& f,
                            double rel_tol, int max_order) {
  const long double half_pi = 1.57079632679489661923132169163975144L;
  return adaptive<long double>(f, half_pi, half_pi, rel_tol, max_order);
}

}  // namespace mmds::special
