#ifndef PSGAMES_FORAGING_HPP
#define PSGAMES_FORAGING_HPP

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "psgames/binomial.hpp"
#include "psgames/core.hpp"

// The foraging game: n animals choose between producing (finding food worth
// F_P = 1+gamma calories) and scrounging (finding F_S = gamma). The finder
// eats a share s of what it finds; the rest is split equally between the
// finder and all scroungers. Scrounger-to-scrounger exchanges cancel in
// expectation and are ignored throughout.

namespace psgames {

struct ForagingParams {
  int n;
  double s;
  double gamma;

  ForagingParams(int n_, double s_, double gamma_) : n(n_), s(s_), gamma(gamma_) {
    if (n < 2) throw std::domain_error("foraging: n must be >= 2");
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("foraging: s must lie in [0,1]");
    if (!(gamma >= 0.0)) throw std::domain_error("foraging: gamma must be >= 0");
  }

  double food_producer() const { return 1.0 + gamma; }  // F_P
  double food_scrounger() const { return gamma; }       // F_S
};

struct GammaBounds {
  double gamma1;
  double gamma2;
  std::optional<double> gamma_s;  // set only for n = 2, where gamma1 = gamma2 = gamma_s
};

// Pure-strategy payoffs with exactly k producers present:
//   pi_P = s(1+gamma) + (1-s)(1+gamma)/(1+n-k)
//   pi_S = gamma + k(1-s)(1+gamma)/(1+n-k)
inline std::pair<double, double> pure_payoffs_given_k(const ForagingParams& fp, int k) {
  if (k < 0 || k > fp.n) throw std::domain_error("pure_payoffs_given_k: k out of range");
  const double shared = (1.0 - fp.s) * fp.food_producer() / double(1 + fp.n - k);
  return {fp.s * fp.food_producer() + shared, fp.food_scrounger() + k * shared};
}

// pi_{1,p}: focal producer against n-1 co-players producing with probability p.
// The number of scroungers among them is X ~ B(n-1, 1-p), and the fallen food
// term is (1-s) F_P E[1/(1+X)], which extends continuously to F_P at p = 1.
inline double producer_payoff(const ForagingParams& fp, double p) {
  check_probability(p, "p");
  const double fp_cal = fp.food_producer();
  return fp.s * fp_cal + (1.0 - fp.s) * fp_cal * mean_inv_one_plus(fp.n - 1, 1.0 - p);
}

// pi_{0,p}: focal scrounger; Y ~ B(n-1, p) producers feed it (1-s) F_P E[Y/(1+n-Y)].
inline double scrounger_payoff(const ForagingParams& fp, double p) {
  check_probability(p, "p");
  return fp.food_scrounger() +
         (1.0 - fp.s) * fp.food_producer() * mean_shifted_ratio(fp.n - 1, p);
}

// f(p) = (1/(1-p)) ((1-p^n)/(1-p) - np), extended by f(1) = -n(n-3)/2.
// f is a polynomial of degree n-2; in x = 1-p it reads
//   f = -n(n-3)/2 + sum_{j=3}^{n} (-1)^(j+1) C(n,j) x^(j-2),
// which is what we evaluate (exact through p = 1, no cancellation).
inline double threshold_fn(int n, double p) {
  if (n < 2) throw std::domain_error("threshold_fn: n must be >= 2");
  check_probability(p, "p");
  const double x = 1.0 - p;
  double acc = 0.0;
  for (int j = n; j >= 3; --j) {
    const double coeff = binomial_coefficient(n, j);
    acc = acc * x + (j % 2 == 0 ? -coeff : coeff);
  }
  return -0.5 * n * (n - 3) + acc * x;
}

// A(gamma) = n(gamma - s(1+gamma)) / ((1-s)(1+gamma)) = n(1 - 1/((1-s)(1+gamma))).
inline double abundance_fn(int n, double s, double gamma) {
  if (s >= 1.0) throw std::domain_error("abundance_fn: s must be < 1");
  return n * (1.0 - 1.0 / ((1.0 - s) * (1.0 + gamma)));
}

// gamma1 = 2/((n-1)(1-s)) - 1, gamma2 = n/((n-1)(1-s)) - 1; they collapse to
// gamma_s = (1+s)/(1-s) when n = 2.
inline GammaBounds gamma_bounds(int n, double s) {
  if (n < 2) throw std::domain_error("gamma_bounds: n must be >= 2");
  if (s >= 1.0) throw std::domain_error("gamma_bounds: s must be < 1");
  if (n == 2) {
    const double gamma_s = (1.0 + s) / (1.0 - s);
    return {gamma_s, gamma_s, gamma_s};
  }
  const double denom = double(n - 1) * (1.0 - s);
  return {2.0 / denom - 1.0, double(n) / denom - 1.0, std::nullopt};
}

namespace detail {

// Inverse of the strictly decreasing f on [0,1] by bisection to 1e-12.
inline double invert_threshold(int n, double target) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (threshold_fn(n, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::string foraging_label(const char* family, int n, double s, double gamma) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(n=%d,s=%g,gamma=%g)", family, n, s, gamma);
  return buf;
}

}  // namespace detail

// The unique ESS from the closed-form machinery: all-producer below gamma1,
// all-scrounger above gamma2, and p* = f^{-1}(A(gamma)) in between (n >= 3).
// For n = 2 the bounds collapse and every strategy is indifferent exactly at
// gamma_s, where no ESS exists.
inline EssResult analytic_ess(const ForagingParams& fp) {
  if (fp.s >= 1.0) throw std::domain_error("analytic_ess: s must be < 1");
  const GammaBounds bounds = gamma_bounds(fp.n, fp.s);

  const auto finish = [&](EssKind kind, double p_star) {
    EssResult res;
    res.kind = kind;
    res.p_star = p_star;
    res.pi_star = p_star * producer_payoff(fp, p_star) +
                  (1.0 - p_star) * scrounger_payoff(fp, p_star);
    res.total_production =
        fp.n * (p_star * fp.food_producer() + (1.0 - p_star) * fp.food_scrounger());
    return res;
  };

  if (fp.n == 2) {
    const double gamma_s = *bounds.gamma_s;
    if (fp.gamma < gamma_s) return finish(EssKind::AllProducer, 1.0);
    if (fp.gamma > gamma_s) return finish(EssKind::AllScrounger, 0.0);
    return EssResult{};  // degenerate: payoffs identical for every strategy
  }
  if (fp.gamma < bounds.gamma1) return finish(EssKind::AllProducer, 1.0);
  if (fp.gamma > bounds.gamma2) return finish(EssKind::AllScrounger, 0.0);

  const double p_star = detail::invert_threshold(fp.n, abundance_fn(fp.n, fp.s, fp.gamma));
  if (p_star >= 1.0 - 1e-9) return finish(EssKind::AllProducer, 1.0);
  if (p_star <= 1e-9) return finish(EssKind::AllScrounger, 0.0);
  return finish(EssKind::Interior, p_star);
}

inline GameInstance make_foraging_game(const ForagingParams& fp) {
  GameInstance game;
  game.pure_payoff = [fp](bool producer, double p) {
    return producer ? producer_payoff(fp, p) : scrounger_payoff(fp, p);
  };
  game.production = [fp](double p) {
    return fp.n * (p * fp.food_producer() + (1.0 - p) * fp.food_scrounger());
  };
  game.label = detail::foraging_label("foraging", fp.n, fp.s, fp.gamma);
  return game;
}

inline std::function<GameInstance(double)> make_foraging_family(int n, double s) {
  return [n, s](double gamma) { return make_foraging_game(ForagingParams(n, s, gamma)); };
}

// ---------------------------------------------------------------------------
// Modified variant: a producer eats only its finder's share; the fallen food
// goes to the scroungers alone. Its payoff is therefore independent of the
// other players' strategies, which kills the Reverse-Correlation phenomenon.

// The prose description of the variant and its stated producer payoff
// disagree: eating only the finder's share yields s(1+gamma), while the text
// asserts 1+gamma. Both are constant in p, which is all that matters for the
// no-RC result, so both readings are available here.
enum class ModifiedProducerRule { FinderShareOnly, FullFind };

struct ModifiedForagingParams {
  int n;
  double s;
  double gamma;
  ModifiedProducerRule rule;

  ModifiedForagingParams(int n_, double s_, double gamma_,
                         ModifiedProducerRule rule_ = ModifiedProducerRule::FinderShareOnly)
      : n(n_), s(s_), gamma(gamma_), rule(rule_) {
    if (n < 2) throw std::domain_error("modified foraging: n must be >= 2");
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("modified foraging: s must lie in [0,1]");
    if (!(gamma >= 0.0)) throw std::domain_error("modified foraging: gamma must be >= 0");
  }

  double food_producer() const { return 1.0 + gamma; }
  double food_scrounger() const { return gamma; }
};

inline double modified_producer_payoff(const ModifiedForagingParams& fp, double p) {
  check_probability(p, "p");
  return fp.rule == ModifiedProducerRule::FinderShareOnly ? fp.s * fp.food_producer()
                                                          : fp.food_producer();
}

// F_S + (1-s) F_P E[Y/(n-Y)] with Y ~ B(n-1, p) producers among the others;
// the focal scrounger always counts itself in the n-Y sharers. Enumerated
// directly, there is no closed form to lean on.
inline double modified_scrounger_payoff(const ModifiedForagingParams& fp, double p) {
  check_probability(p, "p");
  const int m = fp.n - 1;
  double expectation = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double weight =
        binomial_coefficient(m, k) * std::pow(p, k) * std::pow(1.0 - p, m - k);
    expectation += weight * double(k) / double(fp.n - k);
  }
  return fp.food_scrounger() + (1.0 - fp.s) * fp.food_producer() * expectation;
}

inline GameInstance make_modified_foraging_game(const ModifiedForagingParams& fp) {
  GameInstance game;
  game.pure_payoff = [fp](bool producer, double p) {
    return producer ? modified_producer_payoff(fp, p) : modified_scrounger_payoff(fp, p);
  };
  game.production = [fp](double p) {
    return fp.n * (p * fp.food_producer() + (1.0 - p) * fp.food_scrounger());
  };
  game.label = detail::foraging_label("foraging-modified", fp.n, fp.s, fp.gamma);
  return game;
}

inline std::function<GameInstance(double)> make_modified_foraging_family(
    int n, double s, ModifiedProducerRule rule = ModifiedProducerRule::FinderShareOnly) {
  return [n, s, rule](double gamma) {
    return make_modified_foraging_game(ModifiedForagingParams(n, s, gamma, rule));
  };
}

}  // namespace psgames

#endif  // PSGAMES_FORAGING_HPP
