#ifndef PSGAMES_SOLVER_HPP
#define PSGAMES_SOLVER_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "psgames/core.hpp"

// Numeric ESS search: evaluate the payoff gap h(p) = pi_{1,p} - pi_{0,p} on a
// grid, classify its sign pattern, and bisect the single + -> - crossing when
// there is one. The sufficient conditions (gap positive below the root,
// negative above) are exactly what makes the crossing the unique ESS.

namespace psgames {

struct SolverConfig {
  int grid_points = 2001;
  double root_tol = 1e-10;
  double gap_tol = 1e-9;  // |h| below this counts as indifference
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { MultipleCrossings, NonFiniteEvaluation };

  SolverError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct VerifyResult {
  bool ok = false;
  std::string violation;  // first violated condition, empty when ok

  explicit operator bool() const { return ok; }
};

namespace detail {

inline void check_solver_config(const SolverConfig& cfg) {
  if (cfg.grid_points < 3) throw std::domain_error("solver: grid_points must be >= 3");
  if (!(cfg.root_tol > 0.0) || !(cfg.gap_tol > 0.0)) {
    throw std::domain_error("solver: tolerances must be > 0");
  }
}

inline EssResult make_result(const GameInstance& game, EssKind kind, double p_star) {
  EssResult res;
  res.kind = kind;
  res.p_star = p_star;
  res.pi_star = game.payoff(p_star, p_star);
  if (game.production) res.total_production = game.production(p_star);
  return res;
}

}  // namespace detail

inline EssResult find_ess(const GameInstance& game, const SolverConfig& cfg = {}) {
  detail::check_solver_config(cfg);
  const int n = cfg.grid_points;
  const double cell = 1.0 / double(n - 1);

  std::vector<int> sign(n);
  bool any_pos = false, any_neg = false, any_zero = false;
  for (int i = 0; i < n; ++i) {
    const double p = (i == n - 1) ? 1.0 : i * cell;
    const double h = payoff_gap(game, p);
    if (!std::isfinite(h)) {
      throw SolverError(SolverError::Kind::NonFiniteEvaluation,
                        "payoff gap is not finite at p=" + std::to_string(p));
    }
    sign[i] = h > cfg.gap_tol ? 1 : (h < -cfg.gap_tol ? -1 : 0);
    any_pos |= sign[i] > 0;
    any_neg |= sign[i] < 0;
    any_zero |= sign[i] == 0;
  }

  if (!any_pos && !any_neg) return EssResult{};  // indifferent everywhere: no ESS
  if (any_pos && !any_neg && !any_zero) {
    return detail::make_result(game, EssKind::AllProducer, 1.0);
  }
  if (any_neg && !any_pos && !any_zero) {
    return detail::make_result(game, EssKind::AllScrounger, 0.0);
  }

  // The sign sequence must be non-increasing (+ run, optional 0 run, - run),
  // which is the grid form of the single-crossing conditions.
  int last_pos = -1, first_neg = n;
  for (int i = 0; i < n; ++i) {
    if (sign[i] > 0) last_pos = i;
    if (sign[i] < 0 && first_neg == n) first_neg = i;
  }
  for (int i = 0; i < n; ++i) {
    const bool ok = (i <= last_pos && sign[i] > 0) ||
                    (i >= first_neg && sign[i] < 0) ||
                    (i > last_pos && i < first_neg && sign[i] == 0);
    if (!ok) {
      throw SolverError(SolverError::Kind::MultipleCrossings,
                        "payoff gap changes sign more than once (grid index " +
                            std::to_string(i) + "); cannot certify a unique ESS");
    }
  }

  if (first_neg == n) {
    // Positive then indifferent up to p=1: only a single trailing zero keeps
    // strict dominance below the boundary.
    if (last_pos != n - 2) {
      throw SolverError(SolverError::Kind::MultipleCrossings,
                        "indifference plateau at the producer boundary");
    }
    return detail::make_result(game, EssKind::AllProducer, 1.0);
  }
  if (last_pos == -1) {
    if (first_neg != 1) {
      throw SolverError(SolverError::Kind::MultipleCrossings,
                        "indifference plateau at the scrounger boundary");
    }
    return detail::make_result(game, EssKind::AllScrounger, 0.0);
  }

  double lo = last_pos * cell;
  double hi = (first_neg == n - 1) ? 1.0 : first_neg * cell;
  for (int it = 0; it < 200 && hi - lo > cfg.root_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (payoff_gap(game, mid) > 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  if (root >= 1.0 - 1e-9) return detail::make_result(game, EssKind::AllProducer, 1.0);
  if (root <= 1e-9) return detail::make_result(game, EssKind::AllScrounger, 0.0);
  return detail::make_result(game, EssKind::Interior, root);
}

// Checks the sufficiency conditions for p_star on the grid: the gap vanishes
// at p_star (or keeps the correct strict sign at an occupied boundary), is
// positive strictly below and negative strictly above. Grid points within one
// cell of p_star are left to the indifference tolerance.
inline VerifyResult verify_ess(const GameInstance& game, double p_star,
                               const SolverConfig& cfg = {}) {
  detail::check_solver_config(cfg);
  check_probability(p_star, "p_star");
  const int n = cfg.grid_points;
  const double cell = 1.0 / double(n - 1);

  const auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };

  const double h_star = payoff_gap(game, p_star);
  const bool at_top = p_star >= 1.0 - cell;
  const bool at_bottom = p_star <= cell;
  if (at_top) {
    if (h_star < -cfg.gap_tol) {
      return fail("condition (i): producer boundary occupied but gap is negative");
    }
  } else if (at_bottom) {
    if (h_star > cfg.gap_tol) {
      return fail("condition (i): scrounger boundary occupied but gap is positive");
    }
  } else if (std::abs(h_star) > cfg.gap_tol) {
    return fail("condition (i): |h(p_star)| = " + std::to_string(std::abs(h_star)) +
                " exceeds gap_tol");
  }

  for (int i = 0; i < n; ++i) {
    const double q = (i == n - 1) ? 1.0 : i * cell;
    if (std::abs(q - p_star) <= cell) continue;
    const double h = payoff_gap(game, q);
    if (q < p_star && !(h > 0.0)) {
      return fail("condition (ii): h(q) <= 0 at q=" + std::to_string(q));
    }
    if (q > p_star && !(h < 0.0)) {
      return fail("condition (iii): h(q) >= 0 at q=" + std::to_string(q));
    }
  }
  return VerifyResult{true, {}};
}

}  // namespace psgames

#endif  // PSGAMES_SOLVER_HPP
