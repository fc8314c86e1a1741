#include "dfs/states.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace dfs {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

SqueezedState::SqueezedState(double r_, double phi_) : r(r_) {
  if (!(r >= 0.0)) throw std::domain_error("SqueezedState: r must be >= 0");
  phi = std::fmod(phi_, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
}

DFSChannel::DFSChannel(cplx a1, cplx a2, int n1_, int n2_)
    : alpha1(a1), alpha2(a2), n1(n1_), n2(n2_) {
  if (n1 < 0 || n2 < 0) throw std::domain_error("DFSChannel: photon numbers must be >= 0");
}

cplx chi_coherent(const CoherentState& s, const PhasePoint& g) {
  const cplx gamma = g.gamma;
  return std::exp(-0.5 * std::norm(gamma) + std::conj(s.alpha) * gamma -
                  s.alpha * std::conj(gamma));
}

cplx chi_squeezed(const SqueezedState& s, const PhasePoint& g) {
  const cplx gamma = g.gamma;
  const cplx xi = gamma * std::cosh(s.r) +
                  std::conj(gamma) * std::polar(std::sinh(s.r), s.phi);
  return std::exp(cplx(-0.5 * std::norm(xi), 0.0));
}

cplx chi_input(const InputState& s, const PhasePoint& g) {
  return std::visit(
      [&](const auto& st) {
        if constexpr (std::is_same_v<std::decay_t<decltype(st)>, CoherentState>)
          return chi_coherent(st, g);
        else
          return chi_squeezed(st, g);
      },
      s);
}

cplx chi_dfs(const DFSChannel& c, const PhasePoint& g1, const PhasePoint& g2) {
  const cplx gamma1 = g1.gamma;
  const cplx gamma2 = g2.gamma;
  const cplx gauss = std::exp(-0.5 * std::norm(gamma1) - 0.5 * std::norm(gamma2) +
                              std::conj(c.alpha1) * gamma1 - c.alpha1 * std::conj(gamma1) +
                              std::conj(c.alpha2) * gamma2 - c.alpha2 * std::conj(gamma2));
  return gauss * laguerre(c.n1, std::norm(gamma1)) * laguerre(c.n2, std::norm(gamma2));
}

}  // namespace dfs
