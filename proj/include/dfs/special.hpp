#pragma once

#include <complex>
#include <stdexcept>

namespace dfs {

using cplx = std::complex<double>;

// Associated Laguerre order L_n^{(k)}; k = 0 gives the ordinary polynomial.
struct LaguerreOrder {
  int n = 0;  // degree, >= 0
  int k = 0;  // association order, >= -n

  LaguerreOrder(int degree, int assoc = 0) : n(degree), k(assoc) {
    if (n < 0) throw std::domain_error("LaguerreOrder: degree must be >= 0");
    if (k < -n) throw std::domain_error("LaguerreOrder: association order must be >= -n");
  }
};

// L_n^{(k)}(x) by upward three-term recurrence in n. Exact for the
// polynomial degree, accepts complex arguments.
cplx laguerre(const LaguerreOrder& order, cplx x);

inline cplx laguerre(int n, cplx x) { return laguerre(LaguerreOrder(n), x); }
inline double laguerre(int n, double x) { return laguerre(LaguerreOrder(n), cplx(x)).real(); }

// Explicit-sum evaluation of L_n^{(k)} accumulated in log-space,
// used as the independent cross-check of the recurrence.
cplx laguerre_series(const LaguerreOrder& order, cplx x);

// Gamma((m+1)/2) for integer m >= 0, via log-gamma.
double half_gamma(int m);

// ln C(n, r); exponentiation is left to the caller so that products of
// large binomials can stay in log-space.
double log_binomial(int n, int r);

}  // namespace dfs
