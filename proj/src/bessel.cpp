#include "starkband/bessel.hpp"

#include <cmath>
#include <cstdlib>

namespace starkband {

namespace {

constexpr double kSeriesMaxArg = 10.0;
constexpr int kSeriesMaxOrder = 200;

// sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!) for n >= 0, x >= 0.
long double ascending_series(int n, long double x) {
  const long double half = x / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / static_cast<long double>(i);
  if (term == 0.0L) return 0.0L;

  const long double q = -half * half;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(n + k));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j(int n, double x) {
  // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;

  if (x <= kSeriesMaxArg && n <= kSeriesMaxOrder)
    return sign * static_cast<double>(ascending_series(n, x));
  return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

}  // namespace starkband
