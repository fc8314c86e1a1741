#pragma once

#include <string>
#include <vector>

#include "dfs/states.hpp"

namespace dfs {

// Realistic-protocol parameters. The ideal protocol is the limit
// g = 1, R = 0, tau = 0, n_th = 0. T = sqrt(1 - R^2) is always derived.
struct NoiseParams {
  double g = 1.0;     // gain, >= 0
  double R = 0.0;     // beam-splitter reflectivity, in [0, 1]
  double tau = 0.0;   // damping exponent tau = Upsilon * t, >= 0
  double n_th = 0.0;  // mean thermal occupation, >= 0

  NoiseParams() = default;
  NoiseParams(double g_, double R_, double tau_, double n_th_);

  double T() const { return std::sqrt(1.0 - R * R); }
  static NoiseParams ideal() { return NoiseParams(); }
  bool is_ideal() const { return g == 1.0 && R == 0.0 && tau == 0.0 && n_th == 0.0; }
};

// Thermal phase-space covariance Gamma_{tau,R} = (1 - e^-tau)(1/2 + n_th) + g^2 R^2.
double gamma_thermal(const NoiseParams& n);

// Canonical integrand of the fidelity integral, over gamma = x + i y:
//   w * exp(c11 |gamma|^2 + c20 gamma^2 + c02 gamma*^2 + c10 gamma + c01 gamma*)
//     * prod_i L_{n_i}(s_i |gamma|^2)
struct IntegrandSpec {
  cplx c11{-1.0, 0.0};
  cplx c20{0.0, 0.0};
  cplx c02{0.0, 0.0};
  cplx c10{0.0, 0.0};
  cplx c01{0.0, 0.0};
  struct LaguerreFactor {
    int degree = 0;
    double scale = 1.0;
  };
  std::vector<LaguerreFactor> laguerre_factors;
  double prefactor = 1.0;

  // Integrand value at gamma, without the prefactor.
  cplx eval(cplx gamma) const;

  // Real quadratic form in (x, y) must be negative definite.
  bool integrable() const;
};

enum class Route { Adaptive, GaussHermite, ClosedForm, MonteCarlo };

std::string route_name(Route r);
Route route_from_name(const std::string& name);

struct FidelityResult {
  double value = 0.0;       // in [0, 1] within the error estimate
  double error = 0.0;       // route-specific bound or 3-sigma
  double imag_residual = 0.0;  // |Im| of the raw integral, convention diagnostic
  Route route = Route::ClosedForm;
  double wall_seconds = 0.0;
};

// Output characteristic functions of the teleported state.
cplx chi_out_ideal(const InputState& in, const DFSChannel& ch, const PhasePoint& g);
cplx chi_out_realistic(const InputState& in, const DFSChannel& ch, const NoiseParams& n,
                       const PhasePoint& g);

// Fully expanded canonical integrand of F = (1/pi) Int d^2gamma chi_in(gamma) chi_out(-gamma).
IntegrandSpec fidelity_integrand(const InputState& in, const DFSChannel& ch,
                                 const NoiseParams& n);

struct QuadConfig;  // see dfs/quad.hpp

FidelityResult fidelity(const InputState& in, const DFSChannel& ch, const NoiseParams& n,
                        Route route, const QuadConfig& cfg);
FidelityResult fidelity(const InputState& in, const DFSChannel& ch, const NoiseParams& n,
                        Route route = Route::ClosedForm);

}  // namespace dfs
