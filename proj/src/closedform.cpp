#include "dfs/closedform.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dfs/special.hpp"

namespace dfs {

namespace {

constexpr int kMaxDegree = 32;  // beyond this the quadrature routes are authoritative
constexpr double kLogBudget = 690.0;

// Neumaier-compensated complex accumulator; the moment sum alternates in
// sign and loses digits under naive accumulation.
struct CompensatedSum {
  long double re = 0.0L, im = 0.0L;
  long double cre = 0.0L, cim = 0.0L;

  void add(long double vre, long double vim) {
    long double t = re + vre;
    if (std::fabs(re) >= std::fabs(vre))
      cre += (re - t) + vre;
    else
      cre += (vre - t) + re;
    re = t;
    t = im + vim;
    if (std::fabs(im) >= std::fabs(vim))
      cim += (im - t) + vim;
    else
      cim += (vim - t) + im;
    im = t;
  }
  cplx value() const {
    return cplx(static_cast<double>(re + cre), static_cast<double>(im + cim));
  }
};

std::vector<cplx> power_table(cplx base, int max_exp) {
  std::vector<cplx> t(max_exp + 1);
  t[0] = 1.0;
  for (int i = 1; i <= max_exp; ++i) t[i] = t[i - 1] * base;
  return t;
}

}  // namespace

bool GaussCoeffs::integrable() const {
  return a1.real() < 0.0 && a2.real() < 0.0 && (4.0 * a1 * a2 - a3 * a3).real() > 0.0;
}

StandardizedParams standardize(const GaussCoeffs& c) {
  const cplx D = 4.0 * c.a1 * c.a2 - c.a3 * c.a3;
  const double scale = std::abs(4.0 * c.a1 * c.a2) + std::abs(c.a3 * c.a3);
  if (std::abs(D) <= 1e-14 * (scale + 1.0)) throw DegenerateQuadratic();

  StandardizedParams s;
  // stationary point of the exponent; completing the square gives the
  // pointwise identity exponent(x(z), y(z)) = a6 - (z1^2 + z2^2)/2
  s.mu_x = (c.a3 * c.a5 - 2.0 * c.a2 * c.a4) / D;
  s.mu_y = (c.a3 * c.a4 - 2.0 * c.a1 * c.a5) / D;
  s.sigma_x = std::sqrt(-2.0 * c.a2 / D);
  s.sigma_y = std::sqrt(-2.0 * c.a1 / D);
  s.rho = (c.a3 == cplx(0.0)) ? cplx(0.0)
                              : -c.a3 * s.sigma_x / (2.0 * c.a2 * s.sigma_y);
  s.a6 = 0.5 * (c.a4 * s.mu_x + c.a5 * s.mu_y);
  return s;
}

double gaussian_moment(int n, double b, double a) {
  if (n < 0) throw std::domain_error("gaussian_moment: n must be >= 0");
  if (!(b > 0.0) || !(a > 0.0))
    throw std::domain_error("gaussian_moment: a and b must be > 0");
  if (n % 2 != 0) return 0.0;
  const double e = (n + 1.0) / b;
  return std::exp(std::log(2.0) + std::lgamma(e) - std::log(b) - e * std::log(a));
}

cplx laguerre_gauss_integral(const GaussCoeffs& c) {
  if (!c.integrable())
    throw std::domain_error("laguerre_gauss_integral: quadratic form not integrable");
  if (c.lag.size() > 2)
    throw std::invalid_argument("laguerre_gauss_integral: at most two Laguerre factors");

  int m = 0, n = 0;
  double a = 0.0, b = 0.0;
  if (!c.lag.empty()) {
    m = c.lag[0].first;
    a = c.lag[0].second;
  }
  if (c.lag.size() > 1) {
    n = c.lag[1].first;
    b = c.lag[1].second;
  }
  if (m < 0 || n < 0 || a < 0.0 || b < 0.0)
    throw std::domain_error("laguerre_gauss_integral: bad Laguerre factor");
  if (m > kMaxDegree || n > kMaxDegree)
    throw std::domain_error("laguerre_gauss_integral: degree above complexity guard (32)");
  if (a == 0.0) m = 0;  // L_m(0) = 1
  if (b == 0.0) n = 0;

  const StandardizedParams sp = standardize(c);
  const cplx w = std::sqrt(1.0 - sp.rho * sp.rho);
  const cplx jac = sp.sigma_x * sp.sigma_y * w;

  const int max_pow = 4 * (m + n) + 1;
  const auto mu_x_pow = power_table(sp.mu_x, max_pow);
  const auto mu_y_pow = power_table(sp.mu_y, max_pow);
  const auto sig_x_pow = power_table(sp.sigma_x, max_pow);
  const auto sig_y_pow = power_table(sp.sigma_y, max_pow);
  const auto rho_pow = power_table(sp.rho, max_pow);
  const auto w_pow = power_table(w, max_pow);

  const double log_a = (a > 0.0) ? std::log(a) : 0.0;
  const double log_b = (b > 0.0) ? std::log(b) : 0.0;
  const double log2 = std::log(2.0);

  CompensatedSum sum;
  for (int p = 0; p <= m; ++p) {
    if (p > 0 && a == 0.0) break;
    for (int q = 0; q <= n; ++q) {
      if (q > 0 && b == 0.0) break;
      const int P = p + q;
      const double log_pq = std::lgamma(m + 1.0) + std::lgamma(n + 1.0) -
                            2.0 * std::lgamma(p + 1.0) - 2.0 * std::lgamma(q + 1.0) -
                            std::lgamma(m - p + 1.0) - std::lgamma(n - q + 1.0) +
                            p * log_a + q * log_b;
      const double sign_pq = (P % 2 == 0) ? 1.0 : -1.0;  // (-a)^p (-b)^q
      for (int r = 0; r <= P; ++r) {
        const double log_pqr = log_pq + log_binomial(P, r);
        const int X = 2 * r;
        const int Y = 2 * P - 2 * r;
        for (int s = 0; s <= X; ++s) {
          const double log_s = log_pqr + log_binomial(X, s);
          // only even s + t survives the z1 moment; u must be even too
          for (int t = (s % 2 == 0) ? 0 : 1; t <= Y; t += 2) {
            const double log_st =
                log_s + log_binomial(Y, t) + log2 * (0.5 * (s + t) + 1.0);
            for (int u = 0; u <= t; u += 2) {
              const double logmag = log_st + log_binomial(t, u) +
                                    std::lgamma(0.5 * (s + t - u + 1.0)) +
                                    std::lgamma(0.5 * (u + 1.0));
              if (logmag > kLogBudget)
                throw std::overflow_error(
                    "laguerre_gauss_integral: term exceeds log budget");
              const cplx factor = mu_x_pow[X - s] * mu_y_pow[Y - t] * sig_x_pow[s] *
                                  sig_y_pow[t] * rho_pow[t - u] * w_pow[u];
              const cplx term = sign_pq * std::exp(logmag) * factor;
              sum.add(term.real(), term.imag());
            }
          }
        }
      }
    }
  }
  return std::exp(sp.a6) * jac * sum.value();
}

GaussCoeffs to_gauss_coeffs(const IntegrandSpec& spec) {
  GaussCoeffs g;
  g.a1 = spec.c11 + spec.c20 + spec.c02;
  g.a2 = spec.c11 - spec.c20 - spec.c02;
  g.a3 = cplx(0.0, 2.0) * (spec.c20 - spec.c02);
  g.a4 = spec.c10 + spec.c01;
  g.a5 = cplx(0.0, 1.0) * (spec.c10 - spec.c01);
  for (const auto& lf : spec.laguerre_factors) {
    if (lf.degree == 0 || lf.scale == 0.0) continue;  // unit factor
    g.lag.emplace_back(lf.degree, lf.scale);
  }
  if (g.lag.size() > 2)
    throw std::invalid_argument("to_gauss_coeffs: more than two nontrivial Laguerre factors");
  return g;
}

cplx fidelity_closed(const IntegrandSpec& spec) {
  const GaussCoeffs g = to_gauss_coeffs(spec);
  return spec.prefactor * laguerre_gauss_integral(g);
}

}  // namespace dfs
