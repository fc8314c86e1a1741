#pragma once

#include <cstdint>
#include <stdexcept>

#include "dfs/protocol.hpp"

namespace dfs {

struct QuadConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_refinements = 12;
  int gh_order = 64;
  std::int64_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 0x5eed5eed5eed5eedULL;

  void validate() const;
};

struct IntegralEstimate {
  cplx value{0.0, 0.0};  // imaginary part kept as a diagnostic
  double error = 0.0;    // deterministic bound, or 3-sigma for Monte Carlo
};

// Raised when the error estimate still exceeds the tolerance after the
// refinement budget; carries the last estimate and the remaining gap.
struct IntegrationFailure : std::runtime_error {
  IntegralEstimate last;
  double gap;
  IntegrationFailure(const IntegralEstimate& e, double g);
};

// Nested composite Gauss-Legendre over a truncation box sized from the
// Gaussian envelope and the Laguerre polynomial bound.
IntegralEstimate integrate_adaptive(const IntegrandSpec& f, const QuadConfig& cfg);

// Tensor-product Gauss-Hermite with the real diagonal Gaussian part as weight.
IntegralEstimate integrate_gauss_hermite(const IntegrandSpec& f, const QuadConfig& cfg);

// Importance sampling from the bivariate normal matching the real Gaussian part.
// Deterministic for a fixed mc_seed.
IntegralEstimate integrate_monte_carlo(const IntegrandSpec& f, const QuadConfig& cfg);

}  // namespace dfs
