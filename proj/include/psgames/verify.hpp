#ifndef PSGAMES_VERIFY_HPP
#define PSGAMES_VERIFY_HPP

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "psgames/analysis.hpp"
#include "psgames/company.hpp"
#include "psgames/foraging.hpp"
#include "psgames/oracle.hpp"
#include "psgames/solver.hpp"

// On-demand invariant suites. Each property reports its worst observed error
// so regressions show up as numbers, not just booleans. The same suites back
// the `verify` CLI subcommand and the acceptance tests.

namespace psgames {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double worst_error = 0.0;
  std::string detail;
};

namespace detail {

class Worst {
 public:
  // Strict-inequality checks start from -inf so that an all-negative stream
  // of margins is reported as such; error magnitudes start from zero.
  explicit Worst(double init = 0.0) : worst_(init) {}

  void observe(double err, const std::string& where) {
    if (err > worst_) {
      worst_ = err;
      where_ = where;
    }
  }
  double value() const { return worst_; }
  PropertyResult result(std::string name, double tol) const {
    return {std::move(name), worst_ <= tol, worst_, where_};
  }

 private:
  double worst_;
  std::string where_;
};

inline std::string at(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

inline double brute_producer_payoff(const ForagingParams& fp, double p) {
  double acc = 0.0;
  for (int k = 0; k <= fp.n - 1; ++k) {
    const double w = binomial_coefficient(fp.n - 1, k) * std::pow(p, k) *
                     std::pow(1.0 - p, fp.n - 1 - k);
    acc += w * pure_payoffs_given_k(fp, k + 1).first;
  }
  return acc;
}

inline double brute_scrounger_payoff(const ForagingParams& fp, double p) {
  double acc = 0.0;
  for (int k = 0; k <= fp.n - 1; ++k) {
    const double w = binomial_coefficient(fp.n - 1, k) * std::pow(p, k) *
                     std::pow(1.0 - p, fp.n - 1 - k);
    acc += w * pure_payoffs_given_k(fp, k).second;
  }
  return acc;
}

inline PropertyResult bilinearity_property(const GameInstance& game) {
  std::mt19937 rng(20240613);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Worst worst;
  for (int i = 0; i < 100; ++i) {
    const double q = unit(rng), p = unit(rng);
    const double direct = game.payoff(q, p);
    const double combined =
        q * game.pure_payoff(true, p) + (1.0 - q) * game.pure_payoff(false, p);
    worst.observe(std::abs(direct - combined), at("q=%g p=%g", q, p));
  }
  return worst.result("bilinearity", 1e-12);
}

inline PropertyResult monotone_in_p_property(const GameFamily& family,
                                             const std::vector<double>& gammas) {
  Worst worst;  // worst payoff decrease along increasing p
  for (double gamma : gammas) {
    const GameInstance game = family(gamma);
    for (double q : {0.0, 0.37, 1.0}) {
      double prev = game.payoff(q, 0.0);
      for (int i = 1; i <= 100; ++i) {
        const double p = i / 100.0;
        const double value = game.payoff(q, p);
        worst.observe(prev - value, at("gamma=%g q=%g p=%g", gamma, q, p));
        prev = value;
      }
    }
  }
  return worst.result("payoff_nondecreasing_in_p", 1e-12);
}

inline PropertyResult monotone_in_gamma_property(const GameFamily& family, double gamma_hi) {
  Worst worst;
  for (double q : {0.0, 0.5, 1.0}) {
    for (double p : {0.0, 0.25, 0.75, 1.0}) {
      double prev = family(0.0).payoff(q, p);
      for (double gamma = 0.05; gamma <= gamma_hi + 1e-12; gamma += 0.05) {
        const double value = family(gamma).payoff(q, p);
        worst.observe(prev - value, at("gamma=%g q=%g p=%g", gamma, q, p));
        prev = value;
      }
    }
  }
  return worst.result("payoff_nondecreasing_in_gamma", 1e-12);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Foraging

inline std::vector<PropertyResult> foraging_property_suite(int n, double s) {
  std::vector<PropertyResult> out;
  const GameFamily family = make_foraging_family(n, s);

  {  // closed-form payoffs against direct binomial sums over the pure payoffs
    detail::Worst worst;
    for (int nn = 2; nn <= 10; ++nn) {
      for (double ss : {0.0, 0.3, 0.7, 1.0}) {
        for (double gamma : {0.0, 0.5, 2.0}) {
          const ForagingParams fp(nn, ss, gamma);
          for (int i = 0; i <= 20; ++i) {
            const double p = i / 20.0;
            worst.observe(std::abs(producer_payoff(fp, p) - detail::brute_producer_payoff(fp, p)),
                          detail::at("producer n=%g s=%g p=%g", nn, ss, p));
            worst.observe(std::abs(scrounger_payoff(fp, p) - detail::brute_scrounger_payoff(fp, p)),
                          detail::at("scrounger n=%g s=%g p=%g", nn, ss, p));
          }
        }
      }
    }
    out.push_back(worst.result("closed_form_payoffs_match_binomial_sums", 1e-12));
  }

  {  // the two binomial expectation claims against direct summation
    detail::Worst worst;
    for (int nn = 0; nn <= 12; ++nn) {
      for (int i = 0; i <= 20; ++i) {
        const double p = i / 20.0;
        const oracle::BinomialSpec spec(nn, p);
        worst.observe(std::abs(mean_inv_one_plus(nn, p) - oracle::brute_mean_inv_one_plus(spec)),
                      detail::at("inv_one_plus n=%g p=%g", nn, p));
        worst.observe(std::abs(mean_shifted_ratio(nn, p) - oracle::brute_mean_ratio(spec)),
                      detail::at("shifted_ratio n=%g p=%g", nn, p));
      }
    }
    out.push_back(worst.result("binomial_claims_match_brute_sums", 1e-12));
  }

  out.push_back(detail::bilinearity_property(family(1.0)));
  out.push_back(detail::monotone_in_p_property(family, {0.0, 0.5, 1.0, 2.0, 4.0}));
  out.push_back(detail::monotone_in_gamma_property(family, 5.0));

  {  // f strictly decreasing for n >= 3
    detail::Worst worst(-HUGE_VAL);  // worst (most positive) forward difference
    for (int nn = 3; nn <= 10; ++nn) {
      double prev = threshold_fn(nn, 0.0);
      for (int i = 1; i <= 1000; ++i) {
        const double p = i / 1000.0;
        const double value = threshold_fn(nn, p);
        worst.observe(value - prev, detail::at("n=%g p=%g", nn, p));
        prev = value;
      }
    }
    PropertyResult r = worst.result("threshold_fn_strictly_decreasing", 0.0);
    r.pass = worst.value() < 0.0;  // strict decrease required
    out.push_back(r);
  }

  {  // A strictly increasing in gamma
    detail::Worst worst(-HUGE_VAL);
    for (double ss : {0.0, 0.3, s < 1.0 ? s : 0.9, 0.9}) {
      double prev = abundance_fn(n, ss, 0.0);
      for (double gamma = 0.02; gamma <= 6.0; gamma += 0.02) {
        const double value = abundance_fn(n, ss, gamma);
        worst.observe(prev - value, detail::at("s=%g gamma=%g", ss, gamma));
        prev = value;
      }
    }
    PropertyResult r = worst.result("abundance_fn_strictly_increasing", 0.0);
    r.pass = worst.value() < 0.0;
    out.push_back(r);
  }

  {  // sign(h) == sign(f(p) - A(gamma)) on random draws
    std::mt19937 rng(7151);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    detail::Worst worst;  // size of any sign contradiction
    for (int i = 0; i < 500; ++i) {
      const int nn = 2 + int(unit(rng) * 7);
      const double ss = 0.95 * unit(rng);
      const double gamma = 5.0 * unit(rng);
      const double p = unit(rng);
      const ForagingParams fp(nn, ss, gamma);
      const double gap = producer_payoff(fp, p) - scrounger_payoff(fp, p);
      const double fa = threshold_fn(nn, p) - abundance_fn(nn, ss, gamma);
      if ((gap > 1e-9 && fa < -1e-9) || (gap < -1e-9 && fa > 1e-9)) {
        worst.observe(std::min(std::abs(gap), std::abs(fa)),
                      detail::at("n=%g s=%g gamma=%g", nn, ss, gamma));
      }
    }
    out.push_back(worst.result("gap_sign_matches_threshold_condition", 0.0));
  }

  {  // p pi1 + (1-p) pi0 == p F_P + (1-p) F_S: everything found is eaten
    detail::Worst worst;
    for (double gamma : {0.0, 0.5, 1.0, 3.0}) {
      const ForagingParams fp(n, s, gamma);
      for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        const double consumed =
            p * producer_payoff(fp, p) + (1.0 - p) * scrounger_payoff(fp, p);
        const double found = p * fp.food_producer() + (1.0 - p) * fp.food_scrounger();
        worst.observe(std::abs(consumed - found), detail::at("gamma=%g p=%g", gamma, p));
      }
    }
    out.push_back(worst.result("food_conservation", 1e-12));
  }

  if (s < 1.0) {  // numeric solver against the closed-form ESS
    detail::Worst worst;
    const GammaBounds bounds = gamma_bounds(n, s);
    const double hi = bounds.gamma2 + 1.0;
    for (double gamma = 0.0; gamma <= hi + 1e-12; gamma += 0.01) {
      if (n == 2 && std::abs(gamma - *bounds.gamma_s) <= 0.01) continue;
      const EssResult numeric = find_ess(family(gamma));
      const EssResult analytic = analytic_ess(ForagingParams(n, s, gamma));
      if (numeric.kind == EssKind::Degenerate || analytic.kind == EssKind::Degenerate) {
        worst.observe(1.0, detail::at("unexpected degenerate at gamma=%g", gamma));
        continue;
      }
      worst.observe(std::abs(*numeric.p_star - *analytic.p_star),
                    detail::at("gamma=%g", gamma));
    }
    out.push_back(worst.result("solver_matches_analytic_ess", 1e-8));
  }

  if (s < 1.0) {  // gradient-like ascent on h reaches the solver's answer
    detail::Worst worst;
    const GammaBounds bounds = gamma_bounds(n, s);
    const std::vector<double> gammas = {0.5 * std::max(0.0, bounds.gamma1),
                                        0.5 * (std::max(0.0, bounds.gamma1) + bounds.gamma2),
                                        bounds.gamma2 + 1.0};
    for (double gamma : gammas) {
      const GameInstance game = family(gamma);
      const EssResult ess = find_ess(game);
      if (ess.kind == EssKind::Degenerate) continue;
      for (double p0 : {0.1, 0.5, 0.9}) {
        const double reached = oracle::adaptive_dynamics(game, MixedStrategy(p0), 0.01, 50000);
        worst.observe(std::abs(reached - *ess.p_star), detail::at("gamma=%g p0=%g", gamma, p0));
      }
    }
    out.push_back(worst.result("adaptive_dynamics_matches_solver", 1e-4));
  }

  if (n == 2 && s < 1.0) {  // the payoff step of height 1-2eps across gamma_s
    detail::Worst worst;
    const double gamma_s = *gamma_bounds(2, s).gamma_s;
    for (double eps : {0.1, 0.25, 0.4}) {
      const EssResult below = analytic_ess(ForagingParams(2, s, gamma_s - eps));
      const EssResult above = analytic_ess(ForagingParams(2, s, gamma_s + eps));
      const double drop = *below.pi_star - *above.pi_star;
      worst.observe(std::abs(drop - (1.0 - 2.0 * eps)), detail::at("eps=%g", eps));
    }
    out.push_back(worst.result("two_player_payoff_step", 1e-9));
  }

  return out;
}

// ---------------------------------------------------------------------------
// Modified foraging

inline std::vector<PropertyResult> modified_foraging_property_suite(
    int n, double s, ModifiedProducerRule rule = ModifiedProducerRule::FinderShareOnly) {
  std::vector<PropertyResult> out;
  const GameFamily family = make_modified_foraging_family(n, s, rule);

  {  // producer payoff exactly constant in p, under both conventions
    detail::Worst worst;
    for (ModifiedProducerRule r : {ModifiedProducerRule::FinderShareOnly,
                                   ModifiedProducerRule::FullFind}) {
      for (double gamma : {0.0, 0.5, 2.0}) {
        const ModifiedForagingParams fp(n, s, gamma, r);
        const double reference = modified_producer_payoff(fp, 0.0);
        for (int i = 0; i <= 100; ++i) {
          worst.observe(std::abs(modified_producer_payoff(fp, i / 100.0) - reference),
                        detail::at("gamma=%g p=%g", gamma, i / 100.0));
        }
      }
    }
    PropertyResult r = worst.result("producer_payoff_constant_in_p", 0.0);
    r.pass = worst.value() == 0.0;
    out.push_back(r);
  }

  {
    const bool holds = necessary_condition_check(
        family, {0.0, 0.5, 1.0, 2.0, 3.0}, 0.01, 1e-12);
    out.push_back({"necessary_condition_producer_insensitive", holds, holds ? 0.0 : 1.0, ""});
  }

  {  // with the necessary condition satisfied, pi* must not fall anywhere
    const SweepTable table = sweep(family, 0.0, 3.0, 0.01);
    detail::Worst worst;
    std::optional<double> prev;
    for (const SweepRow& row : table.rows) {
      if (!row.pi_star) { prev.reset(); continue; }
      if (prev) worst.observe(*prev - *row.pi_star, detail::at("gamma=%g", row.gamma));
      prev = row.pi_star;
    }
    const auto rc = detect_rc(table, 1e-6);
    PropertyResult r = worst.result("pi_star_nondecreasing_in_gamma", 1e-12);
    if (!rc.empty()) {
      // contradicts the necessary-condition theorem; treat as internal error
      r.pass = false;
      r.detail = "internal error: RC interval found in a producer-insensitive game";
    } else if (r.detail.empty()) {
      r.detail = "rc intervals: none";
    }
    out.push_back(r);
  }

  out.push_back(detail::bilinearity_property(family(1.0)));
  return out;
}

// ---------------------------------------------------------------------------
// Company

inline std::vector<PropertyResult> company_property_suite(const CompanyParams& base) {
  std::vector<PropertyResult> out;
  const GameFamily family = make_company_family(base);

  {  // enumeration reproduces the two-player saturating closed forms
    detail::Worst worst;
    for (double s : {0.5, 0.6, 0.8, 0.95}) {
      for (double c : {0.0, 0.05, 0.1}) {
        for (double gamma = 0.2; gamma <= 3.0 + 1e-12; gamma += 0.2) {
          const CompanyParams cp(2, gamma, s, c, 0.5, 0.5, UtilityKind::exp_saturating(2.0));
          const ChickenMatrix got = chicken_matrix(cp);
          const ChickenMatrix want = chicken_matrix_saturating(gamma, s, c);
          const double err = std::max(
              std::max(std::abs(got.R - want.R), std::abs(got.S - want.S)),
              std::max(std::abs(got.T - want.T), std::abs(got.P - want.P)));
          worst.observe(err, detail::at("s=%g c=%g gamma=%g", s, c, gamma));
        }
      }
    }
    out.push_back(worst.result("matrix_matches_saturating_closed_form", 1e-12));
  }

  {  // and the linear closed forms
    detail::Worst worst;
    for (double s : {0.5, 0.7, 1.0}) {
      for (double a : {0.0, 0.5, 0.9}) {
        for (double p_succ : {0.25, 0.5, 1.0}) {
          for (double gamma = 0.0; gamma <= 3.0 + 1e-12; gamma += 0.5) {
            const CompanyParams cp(2, gamma, s, 0.25, a, p_succ, UtilityKind::linear());
            const ChickenMatrix got = chicken_matrix(cp);
            const ChickenMatrix want = chicken_matrix_linear(gamma, s, 0.25, a, p_succ);
            const double err = std::max(
                std::max(std::abs(got.R - want.R), std::abs(got.S - want.S)),
                std::max(std::abs(got.T - want.T), std::abs(got.P - want.P)));
            worst.observe(err, detail::at("s=%g a=%g gamma=%g", s, a, gamma));
          }
        }
      }
    }
    out.push_back(worst.result("matrix_matches_linear_closed_form", 1e-12));
  }

  {  // S - P > R - T: scroungers lose more when their partner defects
    detail::Worst worst(-HUGE_VAL);  // worst (R-T) - (S-P); must stay negative
    for (double s : {0.5, 0.6, 0.8, 0.95}) {
      for (double c : {0.0, 0.1}) {
        for (double gamma = 0.1; gamma <= 4.0 + 1e-12; gamma += 0.1) {
          const ChickenMatrix m = chicken_matrix_saturating(gamma, s, c);
          worst.observe((m.R - m.T) - (m.S - m.P), detail::at("s=%g c=%g gamma=%g", s, c, gamma));
        }
      }
    }
    PropertyResult r = worst.result("scrounger_exposure_exceeds_producer", 0.0);
    r.pass = worst.value() < 0.0;
    out.push_back(r);
  }

  {  // at zero cost producing dominates: R > S,T and S,T > P
    detail::Worst worst(-HUGE_VAL);
    for (double s : {0.5, 0.6, 0.8, 0.95}) {
      for (double gamma = 0.1; gamma <= 4.0 + 1e-12; gamma += 0.1) {
        const ChickenMatrix m = chicken_matrix_saturating(gamma, s, 0.0);
        const double margin = std::min(std::min(m.R - m.S, m.R - m.T),
                                       std::min(m.S - m.P, m.T - m.P));
        worst.observe(-margin, detail::at("s=%g gamma=%g", s, gamma));
      }
    }
    PropertyResult r = worst.result("producing_dominates_at_zero_cost", 0.0);
    r.pass = worst.value() < 0.0;
    out.push_back(r);
  }

  {  // coth form of pi* against the generic chicken solution, on the interval
    detail::Worst worst;
    for (double s : {0.5, 0.6, 0.75, 0.9}) {
      const auto [gamma0, c0] = choose_c0(s);
      for (double gamma = gamma0 - 0.2; gamma <= gamma0 + 0.2 + 1e-12; gamma += 0.05) {
        const ChickenMatrix m = chicken_matrix_saturating(gamma, s, c0);
        if (!(m.T > m.R && m.R > m.S && m.S > m.P)) continue;
        worst.observe(std::abs(*chicken_ess(m).pi_star - closed_form_pi_star(gamma, s, c0)),
                      detail::at("s=%g gamma=%g", s, gamma));
      }
    }
    out.push_back(worst.result("coth_form_matches_chicken_ess", 1e-10));
  }

  {  // analytic derivative against central differences; negative past the knee
    detail::Worst worst;
    bool all_negative = true;
    for (double s : {0.5, 0.6, 0.75, 0.9}) {
      const auto [gamma0, c0] = choose_c0(s);
      for (double gamma : {gamma0 - 0.1, gamma0, gamma0 + 0.1}) {
        const double analytic = pi_star_derivative(gamma, s, c0);
        const double err = derivative_check(
            [s, c0](double g) { return closed_form_pi_star(g, s, c0); }, gamma, analytic, 1e-6);
        worst.observe(err, detail::at("s=%g gamma=%g", s, gamma));
        all_negative = all_negative && analytic < 0.0;
      }
    }
    PropertyResult r = worst.result("pi_star_derivative_matches_finite_difference", 1e-5);
    r.pass = r.pass && all_negative;
    if (!all_negative) r.detail = "derivative not negative past the knee";
    out.push_back(r);
  }

  if (base.utility.family == UtilityKind::Family::Linear) {
    // monotone pi*/production and no RC anywhere, including across gamma0
    const SweepTable table = sweep(family, 0.0, 3.0, 0.01);
    detail::Worst worst;
    std::optional<double> prev_pi, prev_gamma_col;
    for (const SweepRow& row : table.rows) {
      if (!row.pi_star) { prev_pi.reset(); prev_gamma_col.reset(); continue; }
      if (prev_pi) worst.observe(*prev_pi - *row.pi_star, detail::at("pi gamma=%g", row.gamma));
      if (prev_gamma_col) {
        worst.observe(*prev_gamma_col - *row.total_production,
                      detail::at("production gamma=%g", row.gamma));
      }
      prev_pi = row.pi_star;
      prev_gamma_col = row.total_production;
    }
    PropertyResult r = worst.result("linear_utility_monotone_payoffs", 1e-12);
    const auto rc = detect_rc(table, 1e-6);
    r.pass = r.pass && rc.empty();
    r.detail = rc.empty() ? "RC intervals: none" : "unexpected RC interval";
    out.push_back(r);
  }

  {  // every shipped utility is non-decreasing; the bounded ones are concave
    detail::Worst worst;
    const std::vector<UtilityKind> kinds = {UtilityKind::linear(),
                                            UtilityKind::exp_saturating(2.0),
                                            UtilityKind::capped_linear(1.0), base.utility};
    for (const UtilityKind& kind : kinds) {
      double prev = utility_eval(kind, 0.0);
      for (double x = 0.05; x <= 5.0 + 1e-12; x += 0.05) {
        const double value = utility_eval(kind, x);
        worst.observe(prev - value, "monotone x=" + std::to_string(x));
        prev = value;
        if (kind.family != UtilityKind::Family::Linear) {
          const double mid = utility_eval(kind, 0.5 * x);
          const double chord = 0.5 * (utility_eval(kind, 0.0) + value);
          worst.observe(chord - mid - 1e-12, "concavity x=" + std::to_string(x));
        }
      }
    }
    out.push_back(worst.result("utility_kinds_monotone_concave", 1e-12));
  }

  {  // numeric ESS against the chicken closed form at the choose_c0 point
    const double s = (base.n == 2 && base.s < 1.0) ? base.s : 0.6;
    const auto [gamma0, c0] = choose_c0(s);
    const CompanyParams cp(2, gamma0, s, c0, 0.5, 0.5, UtilityKind::exp_saturating(2.0));
    const EssResult numeric = find_ess(make_company_game(cp));
    const EssResult closed = chicken_ess(chicken_matrix(cp));
    detail::Worst worst;
    if (numeric.kind != EssKind::Interior) {
      worst.observe(1.0, "solver did not find interior ESS");
    } else {
      worst.observe(std::abs(*numeric.p_star - *closed.p_star), "p_star");
      worst.observe(std::abs(*numeric.pi_star - *closed.pi_star) * 100.0, "pi_star(x100)");
    }
    out.push_back(worst.result("solver_matches_chicken_ess", 1e-8));
  }

  out.push_back(detail::bilinearity_property(family(1.0)));
  out.push_back(detail::monotone_in_p_property(family, {0.5, 1.0, 2.0}));
  out.push_back(detail::monotone_in_gamma_property(family, 3.0));
  return out;
}

}  // namespace psgames

#endif  // PSGAMES_VERIFY_HPP
