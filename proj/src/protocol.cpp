#include "dfs/protocol.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dfs/closedform.hpp"
#include "dfs/quad.hpp"

namespace dfs {

NoiseParams::NoiseParams(double g_, double R_, double tau_, double n_th_)
    : g(g_), R(R_), tau(tau_), n_th(n_th_) {
  if (!(g >= 0.0)) throw std::domain_error("NoiseParams: g must be >= 0");
  if (!(R >= 0.0 && R <= 1.0)) throw std::domain_error("NoiseParams: R must lie in [0,1]");
  if (!(tau >= 0.0)) throw std::domain_error("NoiseParams: tau must be >= 0");
  if (!(n_th >= 0.0)) throw std::domain_error("NoiseParams: n_th must be >= 0");
}

double gamma_thermal(const NoiseParams& n) {
  return (1.0 - std::exp(-n.tau)) * (0.5 + n.n_th) + n.g * n.g * n.R * n.R;
}

cplx IntegrandSpec::eval(cplx gamma) const {
  const cplx gc = std::conj(gamma);
  const double t = std::norm(gamma);
  cplx v = std::exp(c11 * t + c20 * gamma * gamma + c02 * gc * gc + c10 * gamma + c01 * gc);
  for (const auto& lf : laguerre_factors) v *= laguerre(lf.degree, cplx(lf.scale * t));
  return v;
}

bool IntegrandSpec::integrable() const {
  // gamma = x + i y maps the quadratic part to
  //   a1 = c11 + c20 + c02, a2 = c11 - c20 - c02, a3 = 2i (c20 - c02);
  // require the real part of that form to be negative definite.
  const double a1 = (c11 + c20 + c02).real();
  const double a2 = (c11 - c20 - c02).real();
  const double a3 = (cplx(0.0, 2.0) * (c20 - c02)).real();
  return a1 < 0.0 && a2 < 0.0 && 4.0 * a1 * a2 - a3 * a3 > 0.0;
}

std::string route_name(Route r) {
  switch (r) {
    case Route::Adaptive: return "adaptive";
    case Route::GaussHermite: return "gauss-hermite";
    case Route::ClosedForm: return "closed-form";
    case Route::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

Route route_from_name(const std::string& name) {
  if (name == "adaptive") return Route::Adaptive;
  if (name == "gauss-hermite") return Route::GaussHermite;
  if (name == "closed-form") return Route::ClosedForm;
  if (name == "monte-carlo") return Route::MonteCarlo;
  throw std::invalid_argument("unknown route '" + name +
                              "' (expected adaptive | gauss-hermite | closed-form | monte-carlo)");
}

cplx chi_out_ideal(const InputState& in, const DFSChannel& ch, const PhasePoint& g) {
  // chi_in(gamma) chi_ch(gamma*, gamma): mode A takes the conjugate-type point.
  return chi_input(in, g) * chi_dfs(ch, g.conj_point(), g);
}

cplx chi_out_realistic(const InputState& in, const DFSChannel& ch, const NoiseParams& n,
                       const PhasePoint& g) {
  const double gT = n.g * n.T();
  const double damp = std::exp(-0.5 * n.tau);
  // x2^2 + p2^2 = 2 |gamma|^2 under the PhasePoint convention.
  const double noise = -gamma_thermal(n) * std::norm(g.gamma);
  return chi_input(in, g.scaled(gT)) *
         chi_dfs(ch, g.conj_point().scaled(gT), g.scaled(damp)) * std::exp(noise);
}

IntegrandSpec fidelity_integrand(const InputState& in, const DFSChannel& ch,
                                 const NoiseParams& n) {
  // Expansion of chi_in(gamma) * chi_out(-gamma) with chi_out from the
  // realistic composition; the ideal case is the g=1, R=0, tau=0 limit.
  const double gT = n.g * n.T();
  const double damp = std::exp(-0.5 * n.tau);

  IntegrandSpec spec;
  spec.prefactor = 1.0 / M_PI;
  spec.c11 = 0.0;

  // Channel factor at (-gT gamma*, -damp gamma) plus the thermal covariance.
  spec.c11 += -0.5 * gT * gT - 0.5 * damp * damp - gamma_thermal(n);
  spec.c10 += gT * ch.alpha1 - damp * std::conj(ch.alpha2);
  spec.c01 += -(gT * std::conj(ch.alpha1) - damp * ch.alpha2);
  spec.laguerre_factors.push_back({ch.n1, gT * gT});
  spec.laguerre_factors.push_back({ch.n2, damp * damp});

  // Input factor chi_in(gamma) chi_in(-gT gamma).
  if (const auto* coh = std::get_if<CoherentState>(&in)) {
    spec.c11 += -0.5 * (1.0 + gT * gT);
    spec.c10 += (1.0 - gT) * std::conj(coh->alpha);
    spec.c01 += -(1.0 - gT) * coh->alpha;
  } else {
    const auto& sq = std::get<SqueezedState>(in);
    // |xi|^2 = |gamma|^2 cosh 2r + (gamma^2 e^{-i phi} + gamma*^2 e^{i phi}) sinh(2r)/2,
    // and xi(s gamma) = s xi(gamma), so the product contributes
    // -(1 + g^2 T^2)/2 * |xi(gamma)|^2.
    const double A = 0.5 * (1.0 + gT * gT);
    spec.c11 += -A * std::cosh(2.0 * sq.r);
    spec.c20 += -0.5 * A * std::sinh(2.0 * sq.r) * std::polar(1.0, -sq.phi);
    spec.c02 += -0.5 * A * std::sinh(2.0 * sq.r) * std::polar(1.0, sq.phi);
  }
  return spec;
}

FidelityResult fidelity(const InputState& in, const DFSChannel& ch, const NoiseParams& n,
                        Route route, const QuadConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const IntegrandSpec spec = fidelity_integrand(in, ch, n);

  FidelityResult res;
  res.route = route;
  cplx raw;
  if (route == Route::ClosedForm) {
    raw = fidelity_closed(spec);
    res.error = 1e-10 * (1.0 + std::abs(raw));
  } else {
    IntegralEstimate est;
    switch (route) {
      case Route::Adaptive: est = integrate_adaptive(spec, cfg); break;
      case Route::GaussHermite: est = integrate_gauss_hermite(spec, cfg); break;
      default: est = integrate_monte_carlo(spec, cfg); break;
    }
    raw = spec.prefactor * est.value;
    res.error = spec.prefactor * est.error;
  }
  res.value = raw.real();
  res.imag_residual = std::abs(raw.imag());
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

FidelityResult fidelity(const InputState& in, const DFSChannel& ch, const NoiseParams& n,
                        Route route) {
  return fidelity(in, ch, n, route, QuadConfig{});
}

}  // namespace dfs
