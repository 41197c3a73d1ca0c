#include "psgames/foraging.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "psgames/solver.hpp"

using namespace psgames;

namespace {

// Direct mixture of the pure payoffs of Eq-style k-producer configurations,
// independent of the closed forms under test.
double brute_producer(const ForagingParams& fp, double p) {
  double acc = 0.0;
  for (int k = 0; k <= fp.n - 1; ++k) {
    const double w = binomial_coefficient(fp.n - 1, k) * std::pow(p, k) *
                     std::pow(1.0 - p, fp.n - 1 - k);
    acc += w * pure_payoffs_given_k(fp, k + 1).first;
  }
  return acc;
}

double brute_scrounger(const ForagingParams& fp, double p) {
  double acc = 0.0;
  for (int k = 0; k <= fp.n - 1; ++k) {
    const double w = binomial_coefficient(fp.n - 1, k) * std::pow(p, k) *
                     std::pow(1.0 - p, fp.n - 1 - k);
    acc += w * pure_payoffs_given_k(fp, k).second;
  }
  return acc;
}

// f as literally defined, valid only for p < 1.
double f_definition(int n, double p) {
  return ((1.0 - std::pow(p, n)) / (1.0 - p) - n * p) / (1.0 - p);
}

}  // namespace

TEST(PurePayoffs, HandComputedExamples) {
  const auto [pp, ps] = pure_payoffs_given_k(ForagingParams(2, 0.5, 0.0), 1);
  EXPECT_NEAR(pp, 0.75, 1e-15);
  EXPECT_NEAR(ps, 0.25, 1e-15);
  // No scroungers: the producer keeps everything it finds.
  EXPECT_NEAR(pure_payoffs_given_k(ForagingParams(5, 0.7, 0.0), 5).first, 1.0, 1e-15);
  // No producers: a scrounger only eats its own low-hanging find.
  EXPECT_NEAR(pure_payoffs_given_k(ForagingParams(5, 0.7, 2.0), 0).second, 2.0, 1e-15);
  EXPECT_THROW(pure_payoffs_given_k(ForagingParams(3, 0.5, 1.0), 4), std::domain_error);
  EXPECT_THROW(pure_payoffs_given_k(ForagingParams(3, 0.5, 1.0), -1), std::domain_error);
}

TEST(ParamsValidation, RejectsBadValues) {
  EXPECT_THROW(ForagingParams(1, 0.5, 0.0), std::domain_error);
  EXPECT_THROW(ForagingParams(2, -0.1, 0.0), std::domain_error);
  EXPECT_THROW(ForagingParams(2, 1.1, 0.0), std::domain_error);
  EXPECT_THROW(ForagingParams(2, 0.5, -0.5), std::domain_error);
}

TEST(ProducerPayoff, EndpointsAndContinuity) {
  EXPECT_NEAR(producer_payoff(ForagingParams(2, 0.5, 1.0), 1.0), 2.0, 1e-15);  // F_P
  EXPECT_NEAR(producer_payoff(ForagingParams(2, 0.0, 0.0), 0.0), 0.5, 1e-15);
  // Near the removable singularity the value must sit on the p=1 limit.
  EXPECT_NEAR(producer_payoff(ForagingParams(4, 0.4, 0.5), 0.999999), 1.5, 1e-4);
}

TEST(ScroungerPayoff, EndpointsAndBinomialOracle) {
  for (double gamma : {0.0, 1.0, 2.5}) {
    EXPECT_DOUBLE_EQ(scrounger_payoff(ForagingParams(4, 0.3, gamma), 0.0), gamma);
  }
  // p=1 limit: F_S + (n-1)(1-s)F_P/2.
  EXPECT_NEAR(scrounger_payoff(ForagingParams(3, 0.5, 1.0), 1.0), 2.0, 1e-15);
  // Interior value against the direct sum over Y ~ B(2, 1/2).
  const ForagingParams fp(3, 0.5, 1.0);
  double expect = 0.0;
  for (int k = 0; k <= 2; ++k) {
    expect += binomial_coefficient(2, k) * std::pow(0.5, 2) *
              (1.0 + 0.5 * 2.0 * k / (4.0 - k));
  }
  EXPECT_NEAR(scrounger_payoff(fp, 0.5), expect, 1e-12);
}

TEST(ClosedFormPayoffs, MatchBruteBinomialSums) {
  for (int n = 2; n <= 10; ++n) {
    for (double s : {0.0, 0.3, 0.7, 1.0}) {
      for (double gamma : {0.0, 0.5, 2.0}) {
        const ForagingParams fp(n, s, gamma);
        for (int i = 0; i <= 20; ++i) {
          const double p = i / 20.0;
          EXPECT_NEAR(producer_payoff(fp, p), brute_producer(fp, p), 1e-12)
              << "n=" << n << " s=" << s << " gamma=" << gamma << " p=" << p;
          EXPECT_NEAR(scrounger_payoff(fp, p), brute_scrounger(fp, p), 1e-12)
              << "n=" << n << " s=" << s << " gamma=" << gamma << " p=" << p;
        }
      }
    }
  }
}

TEST(ThresholdFn, KnownValuesAndDefinition) {
  for (double p : {0.0, 0.3, 0.99, 1.0}) {
    EXPECT_NEAR(threshold_fn(2, p), 1.0, 1e-14);  // constant for two players
  }
  EXPECT_NEAR(threshold_fn(4, 1.0), -2.0, 1e-14);  // -n(n-3)/2
  EXPECT_NEAR(threshold_fn(4, 0.0), 1.0, 1e-14);
  for (int n = 3; n <= 10; ++n) {
    for (double p = 0.0; p < 0.995; p += 0.05) {
      EXPECT_NEAR(threshold_fn(n, p), f_definition(n, p), 1e-10 * (1 + n * n))
          << "n=" << n << " p=" << p;
    }
  }
}

TEST(ThresholdFn, StrictlyDecreasingForThreePlus) {
  for (int n = 3; n <= 10; ++n) {
    double prev = threshold_fn(n, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double value = threshold_fn(n, i / 1000.0);
      EXPECT_LT(value, prev) << "n=" << n << " i=" << i;
      prev = value;
    }
  }
}

TEST(AbundanceFn, ClosedFormIdentities) {
  EXPECT_NEAR(abundance_fn(4, 0.4, 0.5), 4.0 * (1.0 - 1.0 / 0.9), 1e-14);
  for (int n : {3, 4, 7}) {
    for (double s : {0.1, 0.4, 0.8}) {
      const GammaBounds b = gamma_bounds(n, s);
      EXPECT_NEAR(abundance_fn(n, s, b.gamma2), 1.0, 1e-12);
      EXPECT_NEAR(abundance_fn(n, s, b.gamma1), -0.5 * n * (n - 3), 1e-12);
    }
  }
  EXPECT_THROW(abundance_fn(3, 1.0, 0.5), std::domain_error);
}

TEST(AbundanceFn, StrictlyIncreasing) {
  for (double s : {0.0, 0.4, 0.9}) {
    double prev = abundance_fn(5, s, 0.0);
    for (double gamma = 0.05; gamma <= 6.0; gamma += 0.05) {
      const double value = abundance_fn(5, s, gamma);
      EXPECT_GT(value, prev);
      prev = value;
    }
  }
}

TEST(GammaBoundsFn, KnownValues) {
  const GammaBounds b2 = gamma_bounds(2, 0.5);
  ASSERT_TRUE(b2.gamma_s.has_value());
  EXPECT_DOUBLE_EQ(*b2.gamma_s, 3.0);
  EXPECT_DOUBLE_EQ(b2.gamma1, 3.0);
  EXPECT_DOUBLE_EQ(b2.gamma2, 3.0);

  const GammaBounds b4 = gamma_bounds(4, 0.4);
  EXPECT_FALSE(b4.gamma_s.has_value());
  EXPECT_NEAR(b4.gamma1, 2.0 / 1.8 - 1.0, 1e-15);
  EXPECT_NEAR(b4.gamma2, 4.0 / 1.8 - 1.0, 1e-15);

  const GammaBounds b3 = gamma_bounds(3, 0.4);
  EXPECT_NEAR(b3.gamma1, 2.0 / 1.2 - 1.0, 1e-15);
  EXPECT_NEAR(b3.gamma2, 1.5, 1e-15);
  EXPECT_LT(b3.gamma1, b3.gamma2);

  EXPECT_THROW(gamma_bounds(4, 1.0), std::domain_error);
}

TEST(AnalyticEss, RegimesAndBoundaryValues) {
  {  // gamma = gamma1 pins the interior solution at p* = 1
    const GammaBounds b = gamma_bounds(3, 0.4);
    const EssResult ess = analytic_ess(ForagingParams(3, 0.4, b.gamma1));
    ASSERT_TRUE(ess.p_star.has_value());
    EXPECT_NEAR(*ess.p_star, 1.0, 1e-9);
    EXPECT_NEAR(*ess.pi_star, 1.0 + b.gamma1, 1e-9);
  }
  {  // two players below the jump: everyone produces, payoff F_P
    const EssResult ess = analytic_ess(ForagingParams(2, 0.5, 1.0));
    EXPECT_EQ(ess.kind, EssKind::AllProducer);
    EXPECT_DOUBLE_EQ(*ess.p_star, 1.0);
    EXPECT_NEAR(*ess.pi_star, 2.0, 1e-14);
    EXPECT_NEAR(*ess.total_production, 4.0, 1e-14);
  }
  {  // interior point solves f(p*) = A(gamma)
    const EssResult ess = analytic_ess(ForagingParams(4, 0.4, 0.7));
    ASSERT_EQ(ess.kind, EssKind::Interior);
    EXPECT_NEAR(threshold_fn(4, *ess.p_star), abundance_fn(4, 0.4, 0.7), 1e-10);
    // and agrees with the numeric solver
    const EssResult numeric = find_ess(make_foraging_game(ForagingParams(4, 0.4, 0.7)));
    EXPECT_NEAR(*ess.p_star, *numeric.p_star, 1e-8);
  }
  {  // the excluded two-player point has no ESS
    const EssResult ess = analytic_ess(ForagingParams(2, 0.5, 3.0));
    EXPECT_EQ(ess.kind, EssKind::Degenerate);
    EXPECT_FALSE(ess.p_star.has_value());
    EXPECT_FALSE(ess.pi_star.has_value());
  }
  EXPECT_THROW(analytic_ess(ForagingParams(3, 1.0, 0.5)), std::domain_error);
}

TEST(AnalyticEss, TwoPlayerStepHasHeightOneMinusTwoEps) {
  for (double s : {0.2, 0.5, 0.8}) {
    const double gamma_s = *gamma_bounds(2, s).gamma_s;
    for (double eps : {0.1, 0.25, 0.4}) {
      const double below = *analytic_ess(ForagingParams(2, s, gamma_s - eps)).pi_star;
      const double above = *analytic_ess(ForagingParams(2, s, gamma_s + eps)).pi_star;
      EXPECT_NEAR(below - above, 1.0 - 2.0 * eps, 1e-12);
    }
  }
}

TEST(SignEquivalence, GapMatchesThresholdCondition) {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + int(unit(rng) * 7);
    const double s = 0.95 * unit(rng);
    const double gamma = 5.0 * unit(rng);
    const double p = unit(rng);
    const ForagingParams fp(n, s, gamma);
    const double gap = producer_payoff(fp, p) - scrounger_payoff(fp, p);
    const double fa = threshold_fn(n, p) - abundance_fn(n, s, gamma);
    if (std::abs(gap) > 1e-9 && std::abs(fa) > 1e-9) {
      EXPECT_EQ(gap > 0, fa > 0) << "n=" << n << " s=" << s << " gamma=" << gamma;
    }
  }
}

TEST(FoodConservation, ConsumptionEqualsFindings) {
  for (int n : {2, 3, 6}) {
    for (double s : {0.0, 0.4, 1.0}) {
      for (double gamma : {0.0, 1.0, 3.0}) {
        const ForagingParams fp(n, s, gamma);
        for (int i = 0; i <= 100; ++i) {
          const double p = i / 100.0;
          const double consumed =
              p * producer_payoff(fp, p) + (1.0 - p) * scrounger_payoff(fp, p);
          const double found = p * fp.food_producer() + (1.0 - p) * fp.food_scrounger();
          EXPECT_NEAR(consumed, found, 1e-12);
        }
      }
    }
  }
}

TEST(ModifiedGame, ProducerPayoffConstantInP) {
  for (ModifiedProducerRule rule :
       {ModifiedProducerRule::FinderShareOnly, ModifiedProducerRule::FullFind}) {
    const ModifiedForagingParams fp(4, 0.7, 0.5, rule);
    const double reference = modified_producer_payoff(fp, 0.2);
    for (int i = 0; i <= 50; ++i) {
      EXPECT_EQ(modified_producer_payoff(fp, i / 50.0), reference);
    }
  }
  // Finder keeps everything when s=1, so both conventions give F_P.
  const ModifiedForagingParams full(4, 1.0, 0.5, ModifiedProducerRule::FinderShareOnly);
  EXPECT_DOUBLE_EQ(modified_producer_payoff(full, 0.3), 1.5);
  const ModifiedForagingParams fs(3, 0.6, 0.0, ModifiedProducerRule::FinderShareOnly);
  EXPECT_NEAR(modified_producer_payoff(fs, 0.8), 0.6, 1e-15);  // s F_P
  const ModifiedForagingParams ff(3, 0.6, 0.0, ModifiedProducerRule::FullFind);
  EXPECT_NEAR(modified_producer_payoff(ff, 0.8), 1.0, 1e-15);  // 1 + gamma
}

TEST(ModifiedGame, ScroungerPayoffKnownPoints) {
  for (double gamma : {0.0, 1.0, 2.0}) {
    EXPECT_DOUBLE_EQ(
        modified_scrounger_payoff(ModifiedForagingParams(4, 0.3, gamma), 0.0), gamma);
  }
  // Single producer, single scrounger: 1 + 0.5*2*(1/1) = 2.
  EXPECT_NEAR(modified_scrounger_payoff(ModifiedForagingParams(2, 0.5, 1.0), 1.0), 2.0,
              1e-15);
}

TEST(ModifiedGame, ScroungerPayoffMatchesMonteCarlo) {
  // Simulate the full sharing mechanics; the mean must land within three
  // standard errors of the exact enumeration.
  const ModifiedForagingParams fp(3, 0.5, 1.0);
  const double exact = modified_scrounger_payoff(fp, 0.5);

  std::mt19937 rng(20240229);
  std::bernoulli_distribution is_producer(0.5);
  const long trials = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (long t = 0; t < trials; ++t) {
    int producers = 0;
    for (int j = 0; j < fp.n - 1; ++j) producers += is_producer(rng);
    const int scroungers = fp.n - producers;  // focal included
    double intake = fp.s * fp.food_scrounger();
    // Every scrounger drop (own included) is split among the scroungers.
    intake += scroungers * (1.0 - fp.s) * fp.food_scrounger() / scroungers;
    // Producer drops go to the scroungers only.
    intake += producers * (1.0 - fp.s) * fp.food_producer() / scroungers;
    sum += intake;
    sum_sq += intake * intake;
  }
  const double mean = sum / trials;
  const double var = (sum_sq / trials - mean * mean) * trials / (trials - 1.0);
  const double stderr_mean = std::sqrt(var / trials);
  EXPECT_NEAR(mean, exact, 3.0 * stderr_mean + 1e-12);
}

TEST(ModifiedGame, GameInstanceWiresBothSides) {
  const GameInstance game =
      make_modified_foraging_game(ModifiedForagingParams(3, 0.4, 1.0));
  EXPECT_DOUBLE_EQ(game.pure_payoff(true, 0.1), game.pure_payoff(true, 0.9));
  EXPECT_DOUBLE_EQ(game.production(1.0), 3.0 * 2.0);
}
