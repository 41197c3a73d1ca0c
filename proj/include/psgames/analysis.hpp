#ifndef PSGAMES_ANALYSIS_HPP
#define PSGAMES_ANALYSIS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psgames/core.hpp"
#include "psgames/solver.hpp"

// Parameter sweeps over gamma and detection of Reverse-Correlation intervals
// (ranges where the equilibrium payoff falls as gamma rises).

namespace psgames {

using GameFamily = std::function<GameInstance(double gamma)>;

struct SweepRow {
  double gamma = 0.0;
  std::optional<double> second;  // second-axis value, when the sweep has one
  EssKind kind = EssKind::Degenerate;
  std::optional<double> p_star;
  std::optional<double> pi_star;
  std::optional<double> total_production;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::string second_name;  // empty unless a second axis is present
  nlohmann::json metadata = nlohmann::json::object();
};

struct RcInterval {
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  double drop = 0.0;  // value at gamma_lo minus value at gamma_hi

  friend bool operator==(const RcInterval&, const RcInterval&) = default;
};

// One find_ess per grid point gamma_lo + i*step. Degenerate rows are kept with
// absent value fields; solver failures are rethrown annotated with gamma.
inline SweepTable sweep(const GameFamily& family, double gamma_lo, double gamma_hi,
                        double step, const SolverConfig& cfg = {}) {
  if (!(gamma_lo < gamma_hi)) throw std::domain_error("sweep: gamma_lo must be < gamma_hi");
  if (!(step > 0.0)) throw std::domain_error("sweep: step must be > 0");

  SweepTable table;
  const long count = long(std::floor((gamma_hi - gamma_lo) / step + 1e-9)) + 1;
  table.rows.reserve(count);
  std::string label;
  for (long i = 0; i < count; ++i) {
    const double gamma = gamma_lo + double(i) * step;
    const GameInstance game = family(gamma);
    if (label.empty()) label = game.label;
    SweepRow row;
    row.gamma = gamma;
    try {
      const EssResult ess = find_ess(game, cfg);
      row.kind = ess.kind;
      row.p_star = ess.p_star;
      row.pi_star = ess.pi_star;
      row.total_production = ess.total_production;
    } catch (const SolverError& e) {
      throw SolverError(e.kind(), "gamma=" + std::to_string(gamma) + ": " + e.what());
    }
    table.rows.push_back(row);
  }
  table.metadata = {
      {"game", label},
      {"gamma_lo", gamma_lo},
      {"gamma_hi", gamma_hi},
      {"step", step},
      {"solver", {{"grid_points", cfg.grid_points},
                  {"root_tol", cfg.root_tol},
                  {"gap_tol", cfg.gap_tol}}},
      {"tool_version", kVersion},
  };
  return table;
}

namespace detail {

inline std::vector<RcInterval> decreasing_runs(
    const std::vector<SweepRow>& rows, double min_drop,
    const std::function<std::optional<double>(const SweepRow&)>& value) {
  if (rows.empty()) throw std::domain_error("detect_rc: table is empty");
  if (!(min_drop >= 0.0)) throw std::domain_error("detect_rc: min_drop must be >= 0");

  std::vector<RcInterval> out;
  std::optional<RcInterval> run;
  std::optional<double> prev;
  double prev_gamma = 0.0;
  const auto flush = [&] {
    if (run && run->drop >= min_drop) out.push_back(*run);
    run.reset();
  };
  for (const SweepRow& row : rows) {
    const std::optional<double> v = value(row);
    if (!v) continue;  // degenerate rows carry no value; compare across them
    if (prev && *v < *prev) {
      if (!run) run = RcInterval{prev_gamma, row.gamma, 0.0};
      run->gamma_hi = row.gamma;
      run->drop += *prev - *v;
    } else if (prev) {
      flush();
    }
    prev = v;
    prev_gamma = row.gamma;
  }
  flush();
  return out;
}

}  // namespace detail

// Maximal runs of consecutive valued rows with strictly decreasing pi_star,
// reported when the cumulative drop reaches min_drop. Degenerate rows carry no
// payoff; the comparison pairs the rows adjacent to them, so a point drop at a
// degenerate parameter (the n=2 foraging jump) is still reported.
inline std::vector<RcInterval> detect_rc(const SweepTable& table, double min_drop = 1e-6) {
  return detail::decreasing_runs(table.rows, min_drop,
                                 [](const SweepRow& r) { return r.pi_star; });
}

// Same detector applied to the total-production column.
inline std::vector<RcInterval> detect_rc_production(const SweepTable& table,
                                                    double min_drop = 1e-6) {
  return detail::decreasing_runs(table.rows, min_drop,
                                 [](const SweepRow& r) { return r.total_production; });
}

// True iff the producer payoff is insensitive to the co-players' strategies
// (max-min over the p grid within tol) at every sampled gamma. Games passing
// this cannot exhibit Reverse-Correlation.
inline bool necessary_condition_check(const GameFamily& family,
                                      const std::vector<double>& gamma_samples,
                                      double p_grid_step, double tol) {
  if (gamma_samples.empty()) throw std::domain_error("necessary_condition_check: no samples");
  if (!(p_grid_step > 0.0 && p_grid_step <= 1.0)) {
    throw std::domain_error("necessary_condition_check: bad p_grid_step");
  }
  for (double gamma : gamma_samples) {
    const GameInstance game = family(gamma);
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double p = 0.0; p < 1.0 + p_grid_step / 2; p += p_grid_step) {
      const double value = game.pure_payoff(true, std::min(p, 1.0));
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    if (hi - lo > tol) return false;
  }
  return true;
}

// Relative discrepancy between a central finite difference of f at `point`
// and a claimed analytic derivative.
inline double derivative_check(const std::function<double(double)>& f, double point,
                               double analytic, double h) {
  if (!(h > 0.0)) throw std::domain_error("derivative_check: h must be > 0");
  const double central = (f(point + h) - f(point - h)) / (2.0 * h);
  if (!std::isfinite(central)) {
    throw std::domain_error("derivative_check: non-finite evaluation");
  }
  return std::abs(central - analytic) / std::max(1.0, std::abs(analytic));
}

}  // namespace psgames

#endif  // PSGAMES_ANALYSIS_HPP
