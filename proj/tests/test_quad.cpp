#include <cmath>
#include <random>

#include "dfs/quad.hpp"
#include "doctest.h"

using dfs::cplx;
using dfs::IntegrandSpec;
using dfs::QuadConfig;

namespace {

std::mt19937_64 rng(99);
double uni(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random integrable spec: negative-definite quadratic with modest linear and
// Laguerre parts, the regime the fidelity integrands live in.
IntegrandSpec random_spec() {
  IntegrandSpec s;
  for (;;) {
    s.c11 = cplx(uni(-3.0, -0.8), uni(-0.3, 0.3));
    s.c20 = cplx(uni(-0.3, 0.3), uni(-0.3, 0.3));
    s.c02 = std::conj(s.c20);
    if (s.integrable()) break;
  }
  s.c10 = cplx(uni(-1.0, 1.0), uni(-1.0, 1.0));
  s.c01 = -std::conj(s.c10);
  s.laguerre_factors.clear();
  const int n_factors = static_cast<int>(uni(0.0, 3.0));
  for (int i = 0; i < n_factors; ++i)
    s.laguerre_factors.push_back({static_cast<int>(uni(0.0, 5.0)), uni(0.1, 1.5)});
  return s;
}

}  // namespace

TEST_CASE("pure Gaussian: exact area pi / |c11|") {
  IntegrandSpec s;
  s.c11 = cplx(-1.0, 0.0);
  const QuadConfig cfg;
  CHECK(dfs::integrate_adaptive(s, cfg).value.real() == doctest::Approx(M_PI).epsilon(1e-10));
  s.c11 = cplx(-2.0, 0.0);
  CHECK(dfs::integrate_adaptive(s, cfg).value.real() ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-10));
  CHECK(dfs::integrate_gauss_hermite(s, cfg).value.real() ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-10));
}

TEST_CASE("L_1 factor integrates to zero against its natural weight") {
  // int e^{-t} L_1(t) dt = 0 => the 2D integral vanishes
  IntegrandSpec s;
  s.c11 = cplx(-1.0, 0.0);
  s.laguerre_factors.push_back({1, 1.0});
  const QuadConfig cfg;
  CHECK(std::abs(dfs::integrate_adaptive(s, cfg).value) < 1e-8);
  CHECK(std::abs(dfs::integrate_gauss_hermite(s, cfg).value) < 1e-8);
}

TEST_CASE("scaling law: I(lambda c11) = I(c11) / lambda") {
  IntegrandSpec s;
  s.c11 = cplx(-1.3, 0.0);
  const QuadConfig cfg;
  const double base = dfs::integrate_adaptive(s, cfg).value.real();
  for (double lambda : {2.0, 3.7}) {
    IntegrandSpec t = s;
    t.c11 *= lambda;
    CHECK(dfs::integrate_adaptive(t, cfg).value.real() ==
          doctest::Approx(base / lambda).epsilon(1e-9));
  }
}

TEST_CASE("routes agree on random integrands") {
  QuadConfig cfg;
  cfg.mc_samples = 200'000;
  for (int trial = 0; trial < 40; ++trial) {
    const IntegrandSpec s = random_spec();
    const auto a = dfs::integrate_adaptive(s, cfg);
    const auto h = dfs::integrate_gauss_hermite(s, cfg);
    const auto m = dfs::integrate_monte_carlo(s, cfg);
    CHECK(std::abs(a.value - h.value) <=
          std::max(1e-7, 10.0 * (a.error + h.error)) * (1.0 + std::abs(a.value)));
    CHECK(std::abs(a.value.real() - m.value.real()) <= m.error + 1e-7);
  }
}

TEST_CASE("Monte Carlo is deterministic for a fixed seed") {
  const IntegrandSpec s = random_spec();
  QuadConfig cfg;
  cfg.mc_samples = 50'000;
  const auto a = dfs::integrate_monte_carlo(s, cfg);
  const auto b = dfs::integrate_monte_carlo(s, cfg);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  cfg.mc_seed += 1;
  const auto c = dfs::integrate_monte_carlo(s, cfg);
  CHECK(a.value != c.value);
  CHECK(std::abs(a.value.real() - c.value.real()) < a.error + c.error);
}

TEST_CASE("Monte Carlo is exact for the plain Gaussian") {
  // the proposal equals the integrand, so every sample weight is constant
  IntegrandSpec s;
  s.c11 = cplx(-2.0, 0.0);
  QuadConfig cfg;
  cfg.mc_samples = 1000;
  const auto est = dfs::integrate_monte_carlo(s, cfg);
  CHECK(est.value.real() == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(est.error < 1e-12);
}

TEST_CASE("non-integrable specs are rejected") {
  IntegrandSpec s;
  s.c11 = cplx(0.5, 0.0);
  CHECK_FALSE(s.integrable());
  const QuadConfig cfg;
  CHECK_THROWS_AS(dfs::integrate_adaptive(s, cfg), std::domain_error);
  CHECK_THROWS_AS(dfs::integrate_gauss_hermite(s, cfg), std::domain_error);
  CHECK_THROWS_AS(dfs::integrate_monte_carlo(s, cfg), std::domain_error);
}

TEST_CASE("refinement budget exhaustion raises IntegrationFailure") {
  IntegrandSpec s;
  s.c11 = cplx(-1.0, 0.0);
  s.laguerre_factors.push_back({25, 1.0});
  QuadConfig cfg;
  cfg.abs_tol = 1e-300;
  cfg.rel_tol = 1e-300;
  cfg.max_refinements = 1;
  try {
    dfs::integrate_adaptive(s, cfg);
    FAIL("expected IntegrationFailure");
  } catch (const dfs::IntegrationFailure& e) {
    CHECK(e.gap > 0.0);
    CHECK(std::isfinite(e.last.value.real()));
  }
}

TEST_CASE("QuadConfig validation") {
  QuadConfig cfg;
  cfg.abs_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = QuadConfig{};
  cfg.gh_order = 1;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = QuadConfig{};
  cfg.mc_samples = 10;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}
