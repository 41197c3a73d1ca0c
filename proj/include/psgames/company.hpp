#ifndef PSGAMES_COMPANY_HPP
#define PSGAMES_COMPANY_HPP

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "psgames/binomial.hpp"
#include "psgames/core.hpp"

// The company game: n workers choose between producing (cost c, quality gamma
// on success) and scrounging (free, quality a*gamma on success). Production
// succeeds with probability p_succ. The salary is a weighted average of own
// and co-workers' quality, mapped to payoff by a utility function.

namespace psgames {

struct UtilityKind {
  enum class Family { Linear, ExpSaturating, CappedLinear };

  Family family = Family::Linear;
  double param = 0.0;  // rate for ExpSaturating, cap for CappedLinear

  static UtilityKind linear() { return {Family::Linear, 0.0}; }
  static UtilityKind exp_saturating(double rate = 2.0) {
    if (!(rate > 0.0)) throw std::domain_error("utility: rate must be > 0");
    return {Family::ExpSaturating, rate};
  }
  static UtilityKind capped_linear(double cap = 1.0) {
    if (!(cap > 0.0)) throw std::domain_error("utility: cap must be > 0");
    return {Family::CappedLinear, cap};
  }

  // The shapes the accompanying results were derived for; anything else is
  // extrapolation and gets flagged in output metadata.
  bool is_default_shape() const {
    switch (family) {
      case Family::Linear: return true;
      case Family::ExpSaturating: return param == 2.0;
      case Family::CappedLinear: return param == 1.0;
    }
    return false;
  }

  std::string name() const {
    char buf[48];
    switch (family) {
      case Family::Linear: return "linear";
      case Family::ExpSaturating: std::snprintf(buf, sizeof buf, "exp:%g", param); return buf;
      case Family::CappedLinear: std::snprintf(buf, sizeof buf, "cap:%g", param); return buf;
    }
    return "unknown";
  }
};

// Salaries are non-negative by construction, so negative inputs are rejected.
inline double utility_eval(const UtilityKind& kind, double x) {
  if (!(x >= 0.0)) throw std::domain_error("utility_eval: salary must be >= 0");
  switch (kind.family) {
    case UtilityKind::Family::Linear: return x;
    case UtilityKind::Family::ExpSaturating: return -std::expm1(-kind.param * x);
    case UtilityKind::Family::CappedLinear: return std::min(kind.param, x);
  }
  throw std::logic_error("utility_eval: unreachable");
}

struct CompanyParams {
  int n;
  double gamma;
  double s;       // own-production weight in the salary, s in [1/n, 1]
  double c;       // producer energetic cost
  double a;       // scrounger quality factor, a in [0,1)
  double p_succ;  // production success probability
  UtilityKind utility;

  CompanyParams(int n_, double gamma_, double s_, double c_, double a_, double p_succ_,
                UtilityKind utility_)
      : n(n_), gamma(gamma_), s(s_), c(c_), a(a_), p_succ(p_succ_), utility(utility_) {
    if (n < 2) throw std::domain_error("company: n must be >= 2");
    if (!(gamma >= 0.0)) throw std::domain_error("company: gamma must be >= 0");
    if (!(s >= 1.0 / n && s <= 1.0)) throw std::domain_error("company: s must lie in [1/n,1]");
    if (!(c >= 0.0)) throw std::domain_error("company: c must be >= 0");
    if (!(a >= 0.0 && a < 1.0)) throw std::domain_error("company: a must lie in [0,1)");
    check_probability(p_succ_, "p_succ");
  }
};

// Exact expectation of phi(salary) - cost by enumerating, over the n-1
// co-players, the trinomial counts of quality-gamma (prob p*p_succ),
// quality-a*gamma (prob (1-p)*p_succ) and zero outcomes, crossed with the
// focal player's own success. O(n^2) terms, bit-reproducible.
inline double expected_payoff(const CompanyParams& cp, bool focal_is_producer, double p) {
  check_probability(p, "p");
  const int m = cp.n - 1;
  const double w_high = p * cp.p_succ;
  const double w_low = (1.0 - p) * cp.p_succ;
  const double w_none = 1.0 - cp.p_succ;
  const double q_focal = focal_is_producer ? cp.gamma : cp.a * cp.gamma;
  const double peer_weight = (1.0 - cp.s) / double(m);

  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    for (int k = 0; k + j <= m; ++k) {
      const double count = binomial_coefficient(m, j) * binomial_coefficient(m - j, k);
      const double prob = count * std::pow(w_high, j) * std::pow(w_low, k) *
                          std::pow(w_none, m - j - k);
      if (prob == 0.0) continue;
      const double peers = cp.gamma * j + cp.a * cp.gamma * k;
      const double on_success = utility_eval(cp.utility, cp.s * q_focal + peer_weight * peers);
      const double on_failure = utility_eval(cp.utility, peer_weight * peers);
      acc += prob * (cp.p_succ * on_success + (1.0 - cp.p_succ) * on_failure);
    }
  }
  return acc - (focal_is_producer ? cp.c : 0.0);
}

// Expected group production at the symmetric profile p.
inline double total_production(const CompanyParams& cp, double p) {
  check_probability(p, "p");
  return cp.n * cp.p_succ * cp.gamma * (p + (1.0 - p) * cp.a);
}

struct ChickenMatrix {
  double R;  // pi_{1,1}
  double S;  // pi_{1,0}
  double T;  // pi_{0,1}
  double P;  // pi_{0,0}
};

inline ChickenMatrix chicken_matrix(const CompanyParams& cp) {
  if (cp.n != 2) throw std::domain_error("chicken_matrix: requires n = 2");
  return {expected_payoff(cp, true, 1.0), expected_payoff(cp, true, 0.0),
          expected_payoff(cp, false, 1.0), expected_payoff(cp, false, 0.0)};
}

// Closed forms of the two-player matrix for phi(x) = 1-exp(-2x) with
// p_succ = a = 1/2. These are the expressions the enumeration must reproduce.
inline ChickenMatrix chicken_matrix_saturating(double gamma, double s, double c) {
  const double g = gamma;
  const double R = 0.25 * (3.0 - std::exp(-2.0 * g) - std::exp(-2.0 * s * g) -
                           std::exp(-2.0 * (1.0 - s) * g)) - c;
  const double S = 0.25 * (3.0 - std::exp(-(1.0 + s) * g) - std::exp(-2.0 * s * g) -
                           std::exp(-(1.0 - s) * g)) - c;
  const double T = 0.25 * (3.0 - std::exp(-(2.0 - s) * g) - std::exp(-s * g) -
                           std::exp(-2.0 * (1.0 - s) * g));
  const double P = 0.25 * (3.0 - std::exp(-g) - std::exp(-s * g) -
                           std::exp(-(1.0 - s) * g));
  return {R, S, T, P};
}

// Closed forms for the linear utility, any a and p_succ.
inline ChickenMatrix chicken_matrix_linear(double gamma, double s, double c, double a,
                                           double p_succ) {
  const double base = p_succ * gamma;
  return {base - c, base * (s + a - s * a) - c, base * (1.0 - s + s * a), base * a};
}

// With linear utility the payoff gap is constant in p and flips sign at
// gamma0 = c/(p_succ s (1-a)); at gamma0 itself every strategy is equivalent.
inline double linear_threshold(const CompanyParams& cp) {
  if (cp.utility.family != UtilityKind::Family::Linear) {
    throw std::domain_error("linear_threshold: utility must be linear");
  }
  const double denom = cp.p_succ * cp.s * (1.0 - cp.a);
  if (!(denom > 0.0)) throw std::domain_error("linear_threshold: p_succ*s*(1-a) must be > 0");
  return cp.c / denom;
}

// Unique interior ESS of a chicken-ordered 2x2 game (T > R > S > P):
//   p* = (S-P)/(S+T-R-P),  pi* = (ST-RP)/(S+T-R-P).
inline EssResult chicken_ess(const ChickenMatrix& m) {
  if (!(m.T > m.R)) throw std::invalid_argument("chicken_ess: T>R violated");
  if (!(m.R > m.S)) throw std::invalid_argument("chicken_ess: R>S violated");
  if (!(m.S > m.P)) throw std::invalid_argument("chicken_ess: S>P violated");
  const double denom = m.S + m.T - m.R - m.P;
  EssResult res;
  res.kind = EssKind::Interior;
  res.p_star = (m.S - m.P) / denom;
  res.pi_star = (m.S * m.T - m.R * m.P) / denom;
  return res;
}

// pi* on the chicken interval for phi(x)=1-exp(-2x), p_succ=a=1/2:
//   1 - c0 e^(s gamma) (e^(s gamma)+1)/(e^(s gamma)-1) = 1 - c0 e^(s gamma) coth(s gamma / 2).
inline double closed_form_pi_star(double gamma, double s, double c0) {
  const double sg = s * gamma;
  if (!(sg > 0.0)) throw std::domain_error("closed_form_pi_star: s*gamma must be > 0");
  const double e = std::exp(sg);
  return 1.0 - c0 * e * (e + 1.0) / std::expm1(sg);
}

// d pi*/d gamma = (c0 s e^(s gamma)/2) (1 - sinh(s gamma)) / sinh(s gamma / 2)^2.
// Negative exactly when sinh(s gamma) > 1, i.e. gamma > ln(1+sqrt(2))/s.
inline double pi_star_derivative(double gamma, double s, double c0) {
  const double sg = s * gamma;
  if (!(sg > 0.0)) throw std::domain_error("pi_star_derivative: s*gamma must be > 0");
  const double half = std::sinh(0.5 * sg);
  return 0.5 * c0 * s * std::exp(sg) * (1.0 - std::sinh(sg)) / (half * half);
}

// Picks a reference point gamma0 past the derivative's sign knee and a cost c0
// strictly inside (R-T, S-P) evaluated at zero cost, which makes the game a
// chicken game around gamma0. The midpoint maximizes the margin.
inline std::pair<double, double> choose_c0(double s) {
  if (!(s >= 0.0) || s >= 1.0) throw std::domain_error("choose_c0: s must lie in [0,1)");
  const double knee = std::log(1.0 + std::sqrt(2.0)) / s;
  const double gamma0 = std::max(1.0, knee) + 0.5;
  const ChickenMatrix free = chicken_matrix_saturating(gamma0, s, 0.0);
  const double lo = free.R - free.T;
  const double hi = free.S - free.P;
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::logic_error("choose_c0: admissible cost interval is empty");
  }
  const double c0 = 0.5 * (lo + hi);
  const ChickenMatrix m = chicken_matrix_saturating(gamma0, s, c0);
  if (!(m.T > m.R && m.R > m.S && m.S > m.P)) {
    throw std::logic_error("choose_c0: chicken ordering failed at the chosen point");
  }
  return {gamma0, c0};
}

inline std::string company_label(const CompanyParams& cp) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "company(n=%d,s=%g,c=%g,a=%g,p_succ=%g,utility=%s,gamma=%g)",
                cp.n, cp.s, cp.c, cp.a, cp.p_succ, cp.utility.name().c_str(), cp.gamma);
  return buf;
}

inline GameInstance make_company_game(const CompanyParams& cp) {
  GameInstance game;
  game.pure_payoff = [cp](bool producer, double p) { return expected_payoff(cp, producer, p); };
  game.production = [cp](double p) { return total_production(cp, p); };
  game.label = company_label(cp);
  return game;
}

inline std::function<GameInstance(double)> make_company_family(const CompanyParams& base) {
  return [base](double gamma) {
    return make_company_game(
        CompanyParams(base.n, gamma, base.s, base.c, base.a, base.p_succ, base.utility));
  };
}

}  // namespace psgames

#endif  // PSGAMES_COMPANY_HPP
