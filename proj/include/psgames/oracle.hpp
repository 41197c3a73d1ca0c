#ifndef PSGAMES_ORACLE_HPP
#define PSGAMES_ORACLE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "psgames/binomial.hpp"
#include "psgames/core.hpp"

// Brute-force cross-checks. Everything here deliberately avoids the closed
// forms and the grid solver it is used to validate: the expectations are
// plain sums over the binomial support, and the dynamics is a bare ascent on
// the payoff gap.

namespace psgames::oracle {

struct BinomialSpec {
  int trials;
  double success_prob;

  BinomialSpec(int trials_, double success_prob_)
      : trials(trials_), success_prob(check_probability(success_prob_, "success_prob")) {
    if (trials < 0) throw std::domain_error("binomial: trials must be >= 0");
  }
};

inline double pmf(const BinomialSpec& spec, int k) {
  return binomial_coefficient(spec.trials, k) * std::pow(spec.success_prob, k) *
         std::pow(1.0 - spec.success_prob, spec.trials - k);
}

// E[1/(1+X)] by direct summation.
inline double brute_mean_inv_one_plus(const BinomialSpec& spec) {
  double acc = 0.0;
  for (int k = 0; k <= spec.trials; ++k) acc += pmf(spec, k) / double(1 + k);
  return acc;
}

// E[X/(2+n-X)] by direct summation.
inline double brute_mean_ratio(const BinomialSpec& spec) {
  double acc = 0.0;
  for (int k = 0; k <= spec.trials; ++k) {
    acc += pmf(spec, k) * double(k) / double(2 + spec.trials - k);
  }
  return acc;
}

// Grid argmax over the focal mixing weight q of pi_{q,p}. By bilinearity the
// answer is {0}, {1}, or (under indifference) the whole grid.
inline std::vector<double> best_response_set(const GameInstance& game, double p, int grid,
                                             double tol = 1e-9) {
  if (grid < 2) throw std::domain_error("best_response_set: grid must be >= 2");
  check_probability(p, "p");
  std::vector<double> qs(grid), values(grid);
  double best = -HUGE_VAL;
  for (int i = 0; i < grid; ++i) {
    qs[i] = (i == grid - 1) ? 1.0 : double(i) / double(grid - 1);
    values[i] = game.payoff(qs[i], p);
    best = std::max(best, values[i]);
  }
  std::vector<double> out;
  for (int i = 0; i < grid; ++i) {
    if (values[i] >= best - tol) out.push_back(qs[i]);
  }
  return out;
}

// p <- clamp01(p + eta h(p)), iterated. Converges to the single-crossing root
// (or the dominant boundary) without ever consulting the solver.
inline double adaptive_dynamics(const GameInstance& game, MixedStrategy p0, double eta,
                                long steps) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("adaptive_dynamics: eta in (0,1)");
  if (steps < 0) throw std::domain_error("adaptive_dynamics: steps must be >= 0");
  double p = p0.p;
  for (long i = 0; i < steps; ++i) {
    p = std::min(1.0, std::max(0.0, p + eta * payoff_gap(game, p)));
  }
  return p;
}

}  // namespace psgames::oracle

#endif  // PSGAMES_ORACLE_HPP
