#include <cmath>
#include <random>

#include "dfs/protocol.hpp"
#include "dfs/quad.hpp"
#include "doctest.h"

using dfs::cplx;
using dfs::PhasePoint;

namespace {

std::mt19937_64 rng(7);
cplx rand_cplx(double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return cplx(u(rng), u(rng));
}

double fid(const dfs::InputState& in, const dfs::DFSChannel& ch, const dfs::NoiseParams& n,
           dfs::Route route = dfs::Route::ClosedForm) {
  return dfs::fidelity(in, ch, n, route).value;
}

}  // namespace

TEST_CASE("gamma_thermal: limits and a frozen value") {
  CHECK(dfs::gamma_thermal(dfs::NoiseParams::ideal()) == doctest::Approx(0.0));
  // tau -> infinity saturates at 1/2 + n_th (R = 0)
  CHECK(dfs::gamma_thermal(dfs::NoiseParams(1.0, 0.0, 50.0, 2.0)) == doctest::Approx(2.5));
  const dfs::NoiseParams n(1.2, 0.5, 0.7, 0.3);
  CHECK(dfs::gamma_thermal(n) ==
        doctest::Approx((1.0 - std::exp(-0.7)) * 0.8 + 1.44 * 0.25));
  CHECK(n.T() == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("NoiseParams: constructor validation") {
  CHECK_THROWS_AS(dfs::NoiseParams(-0.1, 0.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(dfs::NoiseParams(1.0, 1.1, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(dfs::NoiseParams(1.0, 0.0, -1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(dfs::NoiseParams(1.0, 0.0, 0.0, -0.5), std::domain_error);
}

TEST_CASE("chi_out_realistic reduces to chi_out_ideal in the noiseless limit") {
  const dfs::DFSChannel ch(rand_cplx(), rand_cplx(), 2, 3);
  const dfs::InputState in = dfs::CoherentState{rand_cplx()};
  for (int i = 0; i < 50; ++i) {
    const PhasePoint g(rand_cplx());
    const cplx a = dfs::chi_out_ideal(in, ch, g);
    const cplx b = dfs::chi_out_realistic(in, ch, dfs::NoiseParams::ideal(), g);
    CHECK(std::abs(a - b) < 1e-13);
  }
}

TEST_CASE("fidelity_integrand matches the pointwise chi product") {
  // prefactor * eval(gamma) must equal (1/pi) chi_in(gamma) chi_out(-gamma)
  const std::vector<dfs::InputState> inputs = {dfs::CoherentState{cplx(0.8, -0.4)},
                                               dfs::SqueezedState(0.6, 2.1)};
  const dfs::DFSChannel ch(cplx(0.5, 0.2), cplx(-0.3, 0.7), 2, 1);
  const std::vector<dfs::NoiseParams> noises = {dfs::NoiseParams::ideal(),
                                                dfs::NoiseParams(1.1, 0.6, 0.4, 0.8)};
  for (const auto& in : inputs)
    for (const auto& n : noises) {
      const dfs::IntegrandSpec spec = dfs::fidelity_integrand(in, ch, n);
      for (int i = 0; i < 40; ++i) {
        const cplx gamma = rand_cplx();
        const cplx lhs = spec.prefactor * spec.eval(gamma);
        const cplx rhs = (1.0 / M_PI) * dfs::chi_input(in, PhasePoint(gamma)) *
                         dfs::chi_out_realistic(in, ch, n, PhasePoint(-gamma));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
      }
    }
}

TEST_CASE("ideal coherent fidelity: frozen photon-number table") {
  // F(n1, n2) = C(n1 + n2, n1) / 2^{n1 + n2 + 1} at the optimum alpha1 = alpha2
  const dfs::InputState in = dfs::CoherentState{cplx(0.0)};
  const auto ideal = dfs::NoiseParams::ideal();
  CHECK(fid(in, dfs::DFSChannel(0.0, 0.0, 0, 0), ideal) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(fid(in, dfs::DFSChannel(0.0, 0.0, 1, 1), ideal) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(fid(in, dfs::DFSChannel(0.0, 0.0, 5, 5), ideal) ==
        doctest::Approx(0.123046875).epsilon(1e-8));
  CHECK(fid(in, dfs::DFSChannel(0.0, 0.0, 3, 7), ideal) ==
        doctest::Approx(0.05859375).epsilon(1e-8));
  CHECK(fid(in, dfs::DFSChannel(0.0, 0.0, 2, 4), ideal) ==
        doctest::Approx(15.0 / 128.0).epsilon(1e-8));
}

TEST_CASE("ideal coherent fidelity depends only on beta = alpha1 - conj(alpha2)") {
  const dfs::InputState in = dfs::CoherentState{cplx(0.3, 1.0)};
  const auto ideal = dfs::NoiseParams::ideal();
  const cplx beta(0.7, -0.4);
  const double f0 = fid(in, dfs::DFSChannel(beta, 0.0, 0, 0), ideal);
  // analytic: F = (1/2) exp(-|beta|^2 / 2) for the vacuum channel pair
  CHECK(f0 == doctest::Approx(0.5 * std::exp(-0.5 * std::norm(beta))).epsilon(1e-8));
  for (int i = 0; i < 5; ++i) {
    const cplx shift = rand_cplx();
    const double f = fid(in, dfs::DFSChannel(beta + shift, std::conj(shift), 0, 0), ideal);
    CHECK(f == doctest::Approx(f0).epsilon(1e-8));
  }
}

TEST_CASE("ideal fidelity is independent of the teleported alpha") {
  const auto ideal = dfs::NoiseParams::ideal();
  const dfs::DFSChannel ch(cplx(0.4, 0.1), cplx(0.2, -0.3), 1, 2);
  const double ref = fid(dfs::CoherentState{cplx(0.0)}, ch, ideal);
  for (cplx alpha : {cplx(0.0), cplx(1.0), cplx(2.0, 1.0), cplx(5.0)})
    CHECK(fid(dfs::CoherentState{alpha}, ch, ideal) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("ideal squeezed fidelity: frozen value at r = 2") {
  // F = 1 / sqrt(2 + 2 cosh 2r) for the vacuum channel
  const double f = fid(dfs::SqueezedState(2.0, 0.0), dfs::DFSChannel(0.0, 0.0, 0, 0),
                       dfs::NoiseParams::ideal());
  CHECK(f == doctest::Approx(1.0 / std::sqrt(2.0 + 2.0 * std::cosh(4.0))).epsilon(1e-8));
  CHECK(f == doctest::Approx(0.13290).epsilon(1e-4));
}

TEST_CASE("realistic thermal fidelity: frozen Gaussian value") {
  // g = 1, R = 0, vacuum everything: F = 1 / (3 - e^{-tau}) at n_th = 1
  const dfs::InputState in = dfs::CoherentState{cplx(0.0)};
  const dfs::DFSChannel ch(0.0, 0.0, 0, 0);
  for (double tau : {0.0, 0.5, 1.0, 2.0}) {
    const double f = fid(in, ch, dfs::NoiseParams(1.0, 0.0, tau, 1.0));
    CHECK(f == doctest::Approx(1.0 / (3.0 - std::exp(-tau))).epsilon(1e-8));
  }
}

TEST_CASE("fidelity decreases monotonically in tau with a thermal environment") {
  const dfs::InputState in = dfs::CoherentState{cplx(1.0)};
  const dfs::DFSChannel ch(cplx(0.5), cplx(0.5), 1, 1);
  double prev = 1.0;
  for (double tau : {0.0, 0.3, 0.8, 1.5, 3.0}) {
    const double f = fid(in, ch, dfs::NoiseParams(1.0, 0.0, tau, 2.0));
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("fidelity result fields are sane across routes") {
  const dfs::InputState in = dfs::CoherentState{cplx(1.0, 0.5)};
  const dfs::DFSChannel ch(cplx(0.3, -0.2), cplx(0.1, 0.4), 2, 1);
  const dfs::NoiseParams n(1.1, 0.5, 0.3, 0.2);
  for (auto route : {dfs::Route::Adaptive, dfs::Route::GaussHermite, dfs::Route::ClosedForm,
                     dfs::Route::MonteCarlo}) {
    const auto res = dfs::fidelity(in, ch, n, route);
    CHECK(res.value >= -1e-9);
    CHECK(res.value <= 1.0 + 1e-9);
    CHECK(res.error >= 0.0);
    if (route == dfs::Route::MonteCarlo)
      CHECK(res.imag_residual < res.error + 1e-6);  // statistical imaginary noise
    else
      CHECK(res.imag_residual < 1e-6);
    CHECK(res.route == route);
    CHECK(res.wall_seconds >= 0.0);
  }
}

TEST_CASE("route names round-trip") {
  for (auto route : {dfs::Route::Adaptive, dfs::Route::GaussHermite, dfs::Route::ClosedForm,
                     dfs::Route::MonteCarlo})
    CHECK(dfs::route_from_name(dfs::route_name(route)) == route);
  CHECK_THROWS_AS(dfs::route_from_name("simpson"), std::invalid_argument);
}
