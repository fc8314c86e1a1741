#include "dfs/special.hpp"

#include <cmath>
#include <limits>

namespace dfs {

cplx laguerre(const LaguerreOrder& order, cplx x) {
  const int n = order.n;
  const double k = static_cast<double>(order.k);
  if (n == 0) return 1.0;
  cplx prev = 1.0;            // L_0
  cplx cur = 1.0 + k - x;     // L_1
  for (int j = 1; j < n; ++j) {
    cplx next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx laguerre_series(const LaguerreOrder& order, cplx x) {
  // L_n^{(k)}(x) = sum_i (-1)^i C(n+k, n-i) x^i / i!
  const int n = order.n;
  const int k = order.k;
  cplx sum = 0.0;
  const double absx = std::abs(x);
  const cplx phase = (absx == 0.0) ? cplx(1.0) : x / absx;
  cplx phase_pow = 1.0;
  for (int i = 0; i <= n; ++i, phase_pow *= phase) {
    // C(n+k, n-i) written as (n+k)! / ((n-i)! (k+i)!), valid for k >= -n;
    // it vanishes while k + i < 0.
    if (k + i < 0) continue;
    if (i > 0 && absx == 0.0) continue;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    double logmag = std::lgamma(n + k + 1.0) - std::lgamma(n - i + 1.0) -
                    std::lgamma(k + i + 1.0) - std::lgamma(i + 1.0);
    if (i > 0) logmag += i * std::log(absx);
    sum += sign * std::exp(logmag) * phase_pow;
  }
  return sum;
}

double half_gamma(int m) {
  if (m < 0) throw std::domain_error("half_gamma: m must be >= 0");
  const double lg = std::lgamma((m + 1) / 2.0);
  if (lg > std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error("half_gamma: result exceeds double range");
  return std::exp(lg);
}

double log_binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) throw std::domain_error("log_binomial: need 0 <= r <= n");
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

}  // namespace dfs
