#pragma once

#include <complex>
#include <variant>

#include "dfs/special.hpp"

namespace dfs {

// Phase-space point. Owns the gamma <-> (x, p) convention:
// gamma = (x + i p) / sqrt(2), so d^2 gamma = dx dp / 2.
struct PhasePoint {
  cplx gamma;

  PhasePoint() = default;
  explicit PhasePoint(cplx g) : gamma(g) {}

  static PhasePoint from_xp(double x, double p) {
    return PhasePoint(cplx(x, p) / std::sqrt(2.0));
  }
  double x() const { return std::sqrt(2.0) * gamma.real(); }
  double p() const { return std::sqrt(2.0) * gamma.imag(); }

  // (x, -p), i.e. the conjugate-type argument used for the channel's mode A.
  PhasePoint conj_point() const { return PhasePoint(std::conj(gamma)); }
  PhasePoint scaled(double s) const { return PhasePoint(s * gamma); }
  PhasePoint negated() const { return PhasePoint(-gamma); }
};

struct CoherentState {
  cplx alpha;
};

struct SqueezedState {
  double r = 0.0;    // squeezing magnitude, >= 0
  double phi = 0.0;  // squeezing phase, stored in [0, 2pi)

  SqueezedState(double r_, double phi_);
  SqueezedState() = default;
};

using InputState = std::variant<CoherentState, SqueezedState>;

// Two-mode displaced Fock state |alpha1, alpha2, n1, n2>.
struct DFSChannel {
  cplx alpha1;
  cplx alpha2;
  int n1 = 0;
  int n2 = 0;

  DFSChannel(cplx a1, cplx a2, int n1_, int n2_);
  DFSChannel() = default;
};

// Symmetric-order characteristic functions chi(gamma) = Tr[D(gamma) rho].
cplx chi_coherent(const CoherentState& s, const PhasePoint& g);
cplx chi_squeezed(const SqueezedState& s, const PhasePoint& g);
cplx chi_input(const InputState& s, const PhasePoint& g);
cplx chi_dfs(const DFSChannel& c, const PhasePoint& g1, const PhasePoint& g2);

}  // namespace dfs
