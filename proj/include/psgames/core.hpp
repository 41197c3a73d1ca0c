#ifndef PSGAMES_CORE_HPP
#define PSGAMES_CORE_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace psgames {

inline constexpr const char* kVersion = "1.0.0";

// Rejects NaN as well, since !(NaN >= 0) is true.
inline double check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " +
                            std::to_string(value));
  }
  return value;
}

struct MixedStrategy {
  double p;
  explicit MixedStrategy(double p_) : p(check_probability(p_, "p")) {}
};

enum class EssKind { AllProducer, AllScrounger, Interior, Degenerate };

inline const char* to_string(EssKind kind) {
  switch (kind) {
    case EssKind::AllProducer: return "all_producer";
    case EssKind::AllScrounger: return "all_scrounger";
    case EssKind::Interior: return "interior";
    case EssKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

inline std::optional<EssKind> ess_kind_from_string(const std::string& s) {
  if (s == "all_producer") return EssKind::AllProducer;
  if (s == "all_scrounger") return EssKind::AllScrounger;
  if (s == "interior") return EssKind::Interior;
  if (s == "degenerate") return EssKind::Degenerate;
  return std::nullopt;
}

// p_star/pi_star are absent exactly when kind == Degenerate (no ESS exists).
// total_production is additionally absent for games that do not define one.
struct EssResult {
  EssKind kind = EssKind::Degenerate;
  std::optional<double> p_star;
  std::optional<double> pi_star;
  std::optional<double> total_production;
};

// A symmetric two-strategy game. pure_payoff(true, p) is the expected payoff of
// a producer when each of the other n-1 players produces with probability p;
// pure_payoff(false, p) is the scrounger counterpart. Payoffs of mixed
// strategies are bilinear in the focal mixing weight, so the two pure curves
// determine the whole game. production(p), when set, is the expected total
// production of the group at the symmetric profile p.
//
// Instances are immutable after construction and safe to share across threads.
struct GameInstance {
  std::function<double(bool producer, double p)> pure_payoff;
  std::function<double(double p)> production;
  std::string label;

  double payoff(double q, double p) const {
    check_probability(q, "q");
    check_probability(p, "p");
    if (q == 1.0) return pure_payoff(true, p);
    if (q == 0.0) return pure_payoff(false, p);
    return q * pure_payoff(true, p) + (1.0 - q) * pure_payoff(false, p);
  }
};

inline double mixed_payoff(const GameInstance& game, double q, double p) {
  return game.payoff(q, p);
}

// h(p) = pi_{1,p} - pi_{0,p}. Its sign pattern over p determines the ESS.
inline double payoff_gap(const GameInstance& game, double p) {
  check_probability(p, "p");
  return game.pure_payoff(true, p) - game.pure_payoff(false, p);
}

// Two-player symmetric matrix game with R = pi_{1,1}, S = pi_{1,0},
// T = pi_{0,1}, P = pi_{0,0}.
inline GameInstance make_matrix_game(double R, double S, double T, double P,
                                     std::string label = "matrix") {
  GameInstance game;
  game.pure_payoff = [R, S, T, P](bool producer, double p) {
    return producer ? p * R + (1.0 - p) * S : p * T + (1.0 - p) * P;
  };
  game.label = std::move(label);
  return game;
}

}  // namespace psgames

#endif  // PSGAMES_CORE_HPP
