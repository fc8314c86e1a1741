#pragma once

#include <utility>
#include <vector>

#include "dfs/protocol.hpp"

namespace dfs {

// Real-plane form of the fidelity integrand,
//   exp(a1 x^2 + a2 y^2 + a3 xy + a4 x + a5 y) * L_m[a (x^2+y^2)] * L_n[b (x^2+y^2)]
// with up to two Laguerre factors.
struct GaussCoeffs {
  cplx a1{-1.0, 0.0};
  cplx a2{-1.0, 0.0};
  cplx a3{0.0, 0.0};
  cplx a4{0.0, 0.0};
  cplx a5{0.0, 0.0};
  std::vector<std::pair<int, double>> lag;  // (degree, scale), at most two

  // Re(a1) < 0, Re(a2) < 0, Re(4 a1 a2 - a3^2) > 0.
  bool integrable() const;
};

// Parameters of the standard-normal substitution x = sigma_x z1 + mu_x,
// y = sigma_y (rho z1 + sqrt(1-rho^2) z2) + mu_y, under which the exponent
// becomes a6 - (z1^2 + z2^2)/2 pointwise.
struct StandardizedParams {
  cplx mu_x, mu_y;
  cplx rho;
  cplx sigma_x, sigma_y;
  cplx a6;
};

struct DegenerateQuadratic : std::domain_error {
  DegenerateQuadratic() : std::domain_error("closedform: 4 a1 a2 - a3^2 is degenerate") {}
};

StandardizedParams standardize(const GaussCoeffs& c);

// Int dx x^n exp(-a x^b) over the real line: 2 Gamma((n+1)/b) / (b a^((n+1)/b))
// for even n, zero for odd n. Used with b = 2, a = 1/2.
double gaussian_moment(int n, double b, double a);

// Exact evaluation of the Gaussian integral with up to two Laguerre factors
// by moment expansion; analytic continuation of the real-Gaussian algebra
// to complex coefficients.
cplx laguerre_gauss_integral(const GaussCoeffs& c);

// Map a canonical integrand (gamma = x + i y) to GaussCoeffs.
GaussCoeffs to_gauss_coeffs(const IntegrandSpec& spec);

// Closed-form evaluation of the full fidelity integral, prefactor included.
cplx fidelity_closed(const IntegrandSpec& spec);

}  // namespace dfs
