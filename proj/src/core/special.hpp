#pragma once

#include <functional>
#include <vector>

namespace mmds::special {

// Legendre polynomial of degree n in ambient dimension d >= 3, evaluated by
// the Gegenbauer three-term recurrence. |t| may exceed 1 by at most 1e-14.
double legendre(int n, int d, double t);

// Fills out[0..nmax] with P_{0,d}(t) .. P_{nmax,d}(t) in one recurrence sweep.
void legendre_all(int nmax, int d, long double t, long double* out);

// N_{n,d} = (2n+d-2)(n+d-3)! / (n!(d-2)!), the dimension of the space of
// order-n spherical harmonics; computed in log space and rounded.
long long harmonic_dim(int n, int d);

// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
double sphere_area(int d);

struct QuadRule {
  std::vector<long double> nodes;    // on [-1, 1], ascending
  std::vector<long double> weights;  // sum to 2
};

// Cached Gauss-Legendre rule of the given node count.
const QuadRule& gauss_legendre(int order);

// Adaptive Gauss-Legendre on [-1, 1] with node-count doubling 32, 64, ...,
// max_order, stopping when successive estimates agree to rel_tol (relative to
// the estimate or to the integral of |f| when the value is near zero).
double integrate(const std::function<double(double)>& f, double rel_tol = 1e-12,
                 int max_order = 4096);

// Same scheme on [0, pi] in extended precision; used for the sphere
// integrands after the t = cos(theta) substitution.
long double integrate_theta(const std::function<long double(long double)>& f,
                            double rel_tol = 1e-12, int max_order = 4096);

}  // namespace mmds::special
