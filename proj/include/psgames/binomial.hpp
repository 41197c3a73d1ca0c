#ifndef PSGAMES_BINOMIAL_HPP
#define PSGAMES_BINOMIAL_HPP

#include <cmath>
#include <stdexcept>

#include "psgames/core.hpp"

// Closed forms of the two binomial expectations that drive the foraging
// payoffs. Both are evaluated in a form without removable singularities, so
// they are valid on all of p in [0,1] including the endpoints.

namespace psgames {

// Exact in double for every coefficient below 2^53, which covers desk-scale n.
inline double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// E[1/(1+X)] for X ~ Binomial(n, p): (1-(1-p)^(n+1)) / ((n+1)p), and 1 at p=0.
inline double mean_inv_one_plus(int n, double p) {
  if (n < 0) throw std::domain_error("mean_inv_one_plus: n must be >= 0");
  check_probability(p, "p");
  if (p == 0.0) return 1.0;
  // log1p/expm1 keep 1-(1-p)^(n+1) accurate for small p.
  const double one_minus_pow = -std::expm1(double(n + 1) * std::log1p(-p));
  return one_minus_pow / (double(n + 1) * p);
}

// E[X/(2+n-X)] for X ~ Binomial(n, p):
//   p((n+1)(1-p) + p^(n+1) - 1) / ((n+1)(1-p)^2)  for p < 1, and n/2 at p = 1.
// The quotient is a polynomial identity,
//   p/(n+1) * sum_{j=2}^{n+1} (-1)^j C(n+1,j) (1-p)^(j-2),
// used for p >= 1/2 where the rational form cancels catastrophically.
inline double mean_shifted_ratio(int n, double p) {
  if (n < 0) throw std::domain_error("mean_shifted_ratio: n must be >= 0");
  check_probability(p, "p");
  const int m = n + 1;
  const double x = 1.0 - p;
  if (p == 0.0) return 0.0;
  if (p < 0.5) {
    const double one_minus_pow = -std::expm1(double(m) * std::log(p));
    return p * (m * x - one_minus_pow) / (m * x * x);
  }
  double acc = 0.0;
  for (int j = m; j >= 2; --j) {
    const double coeff = binomial_coefficient(m, j);
    acc = acc * x + (j % 2 == 0 ? coeff : -coeff);
  }
  return p * acc / m;
}

}  // namespace psgames

#endif  // PSGAMES_BINOMIAL_HPP
