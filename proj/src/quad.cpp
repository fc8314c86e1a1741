#include "dfs/quad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace dfs {

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::domain_error("QuadConfig: tolerances must be > 0");
  if (gh_order < 2) throw std::domain_error("QuadConfig: gh_order must be >= 2");
  if (mc_samples < 1000) throw std::domain_error("QuadConfig: mc_samples must be >= 1000");
  if (max_refinements < 1) throw std::domain_error("QuadConfig: max_refinements must be >= 1");
}

IntegrationFailure::IntegrationFailure(const IntegralEstimate& e, double g)
    : std::runtime_error("integration failure: error estimate " + std::to_string(g) +
                         " above tolerance after refinement budget"),
      last(e),
      gap(g) {}

namespace {

struct RealQuadratic {
  double a1, a2, a3;  // Re coefficients of x^2, y^2, xy
};

RealQuadratic real_part(const IntegrandSpec& f) {
  RealQuadratic q;
  q.a1 = (f.c11 + f.c20 + f.c02).real();
  q.a2 = (f.c11 - f.c20 - f.c02).real();
  q.a3 = (cplx(0.0, 2.0) * (f.c20 - f.c02)).real();
  return q;
}

void require_integrable(const IntegrandSpec& f) {
  if (!f.integrable())
    throw std::domain_error("integrand is not integrable: real quadratic form must be "
                            "negative definite");
}

// Largest eigenvalue of the (negative definite) real quadratic form.
double eig_max(const RealQuadratic& q) {
  const double tr = q.a1 + q.a2;
  const double disc = std::sqrt((q.a1 - q.a2) * (q.a1 - q.a2) + q.a3 * q.a3);
  return 0.5 * (tr + disc);
}

// Truncation radius: outside |gamma| = Rc the integrand is below
// abs_tol/100 even after multiplying by the polynomial Laguerre bound
// |L_n(s t)| <= (1 + s t)^n and the linear-term growth.
double truncation_radius(const IntegrandSpec& f, double abs_tol) {
  const RealQuadratic q = real_part(f);
  const double lam = eig_max(q);  // < 0
  const double lin = std::abs(f.c10) + std::abs(f.c01);
  for (double rc = 2.0; rc < 40.0; rc += 0.5) {
    double logenv = lam * rc * rc + lin * rc;
    for (const auto& lf : f.laguerre_factors)
      logenv += lf.degree * std::log1p(lf.scale * rc * rc);
    // crude tail area factor
    logenv += std::log(2.0 * M_PI * rc * rc + 1.0);
    if (logenv < std::log(abs_tol) - std::log(100.0)) return rc;
  }
  return 40.0;
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 8;
constexpr double kGLx[kGL] = {-0.9602898564975362, -0.7966664774136267,
                              -0.5255324099163290, -0.1834346424956498,
                              0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975362};
constexpr double kGLw[kGL] = {0.1012285362903763, 0.2223810344533745,
                              0.3137066458778873, 0.3626837833783620,
                              0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};

cplx composite_gl(const IntegrandSpec& f, double rc, int panels) {
  const double h = 2.0 * rc / panels;
  std::vector<double> nodes, weights;
  nodes.reserve(panels * kGL);
  weights.reserve(panels * kGL);
  for (int p = 0; p < panels; ++p) {
    const double mid = -rc + (p + 0.5) * h;
    for (int i = 0; i < kGL; ++i) {
      nodes.push_back(mid + 0.5 * h * kGLx[i]);
      weights.push_back(0.5 * h * kGLw[i]);
    }
  }
  cplx sum = 0.0;
  for (std::size_t iy = 0; iy < nodes.size(); ++iy) {
    cplx row = 0.0;
    for (std::size_t ix = 0; ix < nodes.size(); ++ix)
      row += weights[ix] * f.eval(cplx(nodes[ix], nodes[iy]));
    sum += weights[iy] * row;
  }
  return sum;
}

// Gauss-Hermite nodes/weights for weight exp(-x^2), by Newton iteration
// on the Hermite recurrence.
void gauss_hermite_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
}

cplx gh_tensor(const IntegrandSpec& f, int order) {
  const RealQuadratic q = real_part(f);
  const double sx = std::sqrt(-q.a1);
  const double sy = std::sqrt(-q.a2);
  std::vector<double> u, w;
  gauss_hermite_rule(order, u, w);
  // residual g = f * exp(-a1r x^2 - a2r y^2); the weight exp(-u^2-v^2)
  // carries the diagonal real Gaussian part.
  cplx sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double x = u[i] / sx;
    cplx row = 0.0;
    for (int j = 0; j < order; ++j) {
      const double y = u[j] / sy;
      const cplx g = f.eval(cplx(x, y)) * std::exp(-q.a1 * x * x - q.a2 * y * y);
      row += w[j] * g;
    }
    sum += w[i] * row;
  }
  return sum / (sx * sy);
}

}  // namespace

IntegralEstimate integrate_adaptive(const IntegrandSpec& f, const QuadConfig& cfg) {
  cfg.validate();
  require_integrable(f);
  const double rc = truncation_radius(f, cfg.abs_tol);
  int panels = 4;
  cplx prev = composite_gl(f, rc, panels);
  IntegralEstimate est;
  for (int level = 0; level < cfg.max_refinements; ++level) {
    panels *= 2;
    const cplx cur = composite_gl(f, rc, panels);
    est.value = cur;
    est.error = std::abs(cur - prev);
    if (est.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(cur))) return est;
    prev = cur;
  }
  throw IntegrationFailure(est, est.error);
}

IntegralEstimate integrate_gauss_hermite(const IntegrandSpec& f, const QuadConfig& cfg) {
  cfg.validate();
  require_integrable(f);
  int order = cfg.gh_order;
  cplx base = gh_tensor(f, order);
  IntegralEstimate est;
  for (int level = 0; level < cfg.max_refinements; ++level) {
    const cplx refined = gh_tensor(f, order + 8);
    est.value = refined;
    est.error = std::abs(refined - base);
    if (est.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(refined))) return est;
    base = refined;
    order += 8;
  }
  throw IntegrationFailure(est, est.error);
}

IntegralEstimate integrate_monte_carlo(const IntegrandSpec& f, const QuadConfig& cfg) {
  cfg.validate();
  require_integrable(f);
  const RealQuadratic q = real_part(f);
  const double det = 4.0 * q.a1 * q.a2 - q.a3 * q.a3;  // > 0
  // covariance of the proposal exp(a1 x^2 + a2 y^2 + a3 xy)
  const double s11 = -2.0 * q.a2 / det;
  const double s22 = -2.0 * q.a1 / det;
  const double s12 = q.a3 / det;
  const double l11 = std::sqrt(s11);
  const double l21 = s12 / l11;
  const double l22 = std::sqrt(s22 - l21 * l21);
  const double norm_const = 2.0 * M_PI / std::sqrt(det);

  std::mt19937_64 rng(cfg.mc_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  cplx mean = 0.0;
  double m2_re = 0.0, m2_im = 0.0;
  for (std::int64_t i = 1; i <= cfg.mc_samples; ++i) {
    const double z1 = gauss(rng);
    const double z2 = gauss(rng);
    const double x = l11 * z1;
    const double y = l21 * z1 + l22 * z2;
    const cplx g =
        f.eval(cplx(x, y)) * std::exp(-(q.a1 * x * x + q.a2 * y * y + q.a3 * x * y));
    const cplx delta = g - mean;
    mean += delta / static_cast<double>(i);
    const cplx delta2 = g - mean;
    m2_re += delta.real() * delta2.real();
    m2_im += delta.imag() * delta2.imag();
  }
  const double n = static_cast<double>(cfg.mc_samples);
  const double var = (m2_re + m2_im) / std::max(1.0, n - 1.0);
  IntegralEstimate est;
  est.value = norm_const * mean;
  est.error = 3.0 * norm_const * std::sqrt(var / n);
  return est;
}

}  // namespace dfs
