#include "psgames/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "psgames/company.hpp"
#include "psgames/foraging.hpp"
#include "psgames/oracle.hpp"

using namespace psgames;

namespace {

GameInstance gap_game(std::function<double(double)> gap, std::string label = "synthetic") {
  GameInstance game;
  game.pure_payoff = [gap = std::move(gap)](bool producer, double p) {
    return producer ? gap(p) : 0.0;
  };
  game.label = std::move(label);
  return game;
}

}  // namespace

TEST(FindEss, ForagingBoundaryRegimes) {
  {
    const EssResult ess = find_ess(make_foraging_game(ForagingParams(2, 0.5, 1.0)));
    EXPECT_EQ(ess.kind, EssKind::AllProducer);
    EXPECT_DOUBLE_EQ(*ess.p_star, 1.0);
    EXPECT_NEAR(*ess.pi_star, 2.0, 1e-12);
  }
  {
    const EssResult ess = find_ess(make_foraging_game(ForagingParams(2, 0.5, 4.0)));
    EXPECT_EQ(ess.kind, EssKind::AllScrounger);
    EXPECT_DOUBLE_EQ(*ess.p_star, 0.0);
    EXPECT_NEAR(*ess.pi_star, 4.0, 1e-12);
  }
}

TEST(FindEss, LinearCompanyAtThresholdIsDegenerate) {
  const CompanyParams base(2, 1.0, 0.7, 0.25, 0.5, 0.5, UtilityKind::linear());
  const double gamma0 = linear_threshold(base);
  const CompanyParams at(2, gamma0, 0.7, 0.25, 0.5, 0.5, UtilityKind::linear());
  const EssResult ess = find_ess(make_company_game(at));
  EXPECT_EQ(ess.kind, EssKind::Degenerate);
  EXPECT_FALSE(ess.p_star.has_value());
  EXPECT_FALSE(ess.pi_star.has_value());
  EXPECT_FALSE(ess.total_production.has_value());
}

TEST(FindEss, ChickenInteriorMatchesClosedForm) {
  const EssResult ess = find_ess(make_matrix_game(3.0, 1.0, 4.0, 0.0, "chicken"));
  ASSERT_EQ(ess.kind, EssKind::Interior);
  EXPECT_NEAR(*ess.p_star, 0.5, 1e-9);
  EXPECT_NEAR(*ess.pi_star, 2.0, 1e-9);
  EXPECT_FALSE(ess.total_production.has_value());  // matrix games define none
}

TEST(FindEss, AgreesWithAnalyticAcrossRegimes) {
  for (int n : {3, 4}) {
    for (double s : {0.2, 0.4}) {
      const GammaBounds b = gamma_bounds(n, s);
      for (double gamma :
           {0.0, std::max(0.0, b.gamma1) * 0.5, 0.5 * (std::max(0.0, b.gamma1) + b.gamma2),
            b.gamma2 + 0.5}) {
        const EssResult numeric = find_ess(make_foraging_game(ForagingParams(n, s, gamma)));
        const EssResult closed = analytic_ess(ForagingParams(n, s, gamma));
        ASSERT_EQ(numeric.kind == EssKind::Degenerate, closed.kind == EssKind::Degenerate);
        EXPECT_NEAR(*numeric.p_star, *closed.p_star, 1e-8)
            << "n=" << n << " s=" << s << " gamma=" << gamma;
      }
    }
  }
}

TEST(FindEss, BoundaryTouchAtGammaOneStillAllProducer) {
  // At gamma = gamma1 the gap vanishes exactly at p=1 but stays positive
  // below, so everyone producing is still the unique ESS.
  const GammaBounds b = gamma_bounds(3, 0.4);
  const EssResult ess = find_ess(make_foraging_game(ForagingParams(3, 0.4, b.gamma1)));
  EXPECT_EQ(ess.kind, EssKind::AllProducer);
  EXPECT_DOUBLE_EQ(*ess.p_star, 1.0);
}

TEST(FindEss, RejectsMultipleCrossings) {
  // gap rises then falls: two sign changes.
  const GameInstance game = gap_game([](double p) { return 0.25 - (p - 0.5) * (p - 0.5); });
  try {
    find_ess(game);
    FAIL() << "expected MultipleCrossings";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), SolverError::Kind::MultipleCrossings);
  }
}

TEST(FindEss, RejectsUpwardCrossing) {
  // A - to + crossing is a bistable boundary situation, not a unique ESS.
  const GameInstance game = gap_game([](double p) { return p - 0.5; });
  EXPECT_THROW(find_ess(game), SolverError);
}

TEST(FindEss, RejectsNonFiniteGap) {
  const GameInstance game = gap_game([](double p) {
    return p > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  });
  try {
    find_ess(game);
    FAIL() << "expected NonFiniteEvaluation";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), SolverError::Kind::NonFiniteEvaluation);
  }
}

TEST(FindEss, ValidatesConfig) {
  const GameInstance game = make_matrix_game(3.0, 1.0, 4.0, 0.0);
  SolverConfig bad;
  bad.grid_points = 2;
  EXPECT_THROW(find_ess(game, bad), std::domain_error);
  bad = SolverConfig{};
  bad.gap_tol = 0.0;
  EXPECT_THROW(find_ess(game, bad), std::domain_error);
}

TEST(VerifyEss, AcceptsSolutionsRejectsPerturbations) {
  const GameInstance game = make_foraging_game(ForagingParams(4, 0.4, 0.7));
  const EssResult ess = find_ess(game);
  ASSERT_EQ(ess.kind, EssKind::Interior);
  EXPECT_TRUE(verify_ess(game, *ess.p_star));
  const VerifyResult perturbed = verify_ess(game, *ess.p_star + 0.1);
  EXPECT_FALSE(perturbed);
  EXPECT_FALSE(perturbed.violation.empty());

  EXPECT_TRUE(verify_ess(make_matrix_game(3.0, 1.0, 4.0, 0.0), 0.5));
  // boundary cases
  EXPECT_TRUE(verify_ess(make_foraging_game(ForagingParams(2, 0.5, 1.0)), 1.0));
  EXPECT_TRUE(verify_ess(make_foraging_game(ForagingParams(2, 0.5, 4.0)), 0.0));
  EXPECT_FALSE(verify_ess(make_foraging_game(ForagingParams(2, 0.5, 4.0)), 1.0));
}

TEST(VerifyEss, IdempotentOnFindEssResults) {
  const std::vector<GameInstance> games = {
      make_foraging_game(ForagingParams(3, 0.4, 1.0)),
      make_foraging_game(ForagingParams(4, 0.2, 0.3)),
      make_matrix_game(3.0, 1.0, 4.0, 0.0),
      make_company_game(CompanyParams(4, 1.0, 0.6, 0.05, 0.5, 0.5,
                                      UtilityKind::exp_saturating(2.0))),
  };
  for (const GameInstance& game : games) {
    const EssResult ess = find_ess(game);
    if (ess.kind == EssKind::Degenerate) continue;
    EXPECT_TRUE(verify_ess(game, *ess.p_star)) << game.label;
  }
}

TEST(AdaptiveDynamics, ConvergesToSolverAnswer) {
  const GameInstance game = make_foraging_game(ForagingParams(4, 0.4, 0.7));
  const EssResult ess = find_ess(game);
  for (double p0 : {0.1, 0.5, 0.9}) {
    const double reached = oracle::adaptive_dynamics(game, MixedStrategy(p0), 0.01, 50000);
    EXPECT_NEAR(reached, *ess.p_star, 1e-4) << "p0=" << p0;
  }
}

TEST(FindEss, RandomFamiliesYieldVerifiableResults) {
  // Any result the solver returns must satisfy the sufficiency conditions it
  // claims to have checked, across randomly drawn game parameters.
  std::mt19937 rng(561);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + int(unit(rng) * 5);
    const double s = 0.9 * unit(rng);
    const double gamma = 4.0 * unit(rng);
    const GameInstance game = make_foraging_game(ForagingParams(n, s, gamma));
    const EssResult ess = find_ess(game);
    if (ess.kind == EssKind::Degenerate) continue;
    EXPECT_TRUE(verify_ess(game, *ess.p_star)) << game.label;
  }
  for (int i = 0; i < 25; ++i) {
    const int n = 2 + int(unit(rng) * 3);
    const double s = 1.0 / n + (1.0 - 1.0 / n) * unit(rng);
    const CompanyParams cp(n, 3.0 * unit(rng), s, 0.2 * unit(rng), 0.9 * unit(rng),
                           unit(rng), UtilityKind::exp_saturating(2.0));
    const GameInstance game = make_company_game(cp);
    const EssResult ess = find_ess(game);
    if (ess.kind == EssKind::Degenerate) continue;
    EXPECT_TRUE(verify_ess(game, *ess.p_star)) << game.label;
  }
}

TEST(Solver, DeterministicUnderConcurrency) {
  const GameInstance game = make_foraging_game(ForagingParams(4, 0.4, 0.7));
  const EssResult reference = find_ess(game);
  std::vector<double> results(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { results[t] = *find_ess(game).p_star; });
  }
  for (auto& th : threads) th.join();
  for (double r : results) EXPECT_EQ(r, *reference.p_star);
}
