#ifndef PSGAMES_CLI_HPP
#define PSGAMES_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psgames/analysis.hpp"
#include "psgames/company.hpp"
#include "psgames/foraging.hpp"
#include "psgames/io.hpp"
#include "psgames/solver.hpp"
#include "psgames/verify.hpp"

// Configuration resolution and the three subcommands (ess, sweep, verify).
// Exit codes: 0 success, 1 runtime error, 2 degenerate (no ESS), 64 usage.

namespace psgames::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDegenerate = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepRange {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

struct SecondAxis {
  std::string name;  // "s" or "c"
  SweepRange range;
};

// Flag values as collected by the option parser; nullopt means "not given".
struct RawArgs {
  std::optional<std::string> game, utility, gamma_range, second_axis, out, format,
      config_path, producer_rule;
  std::optional<int> n, grid_points;
  std::optional<double> s, gamma, c, a, p_succ, min_drop, root_tol, gap_tol;
};

struct RunConfig {
  std::string game = "foraging";
  int n = 2;
  double s = 0.5;
  std::optional<double> gamma;
  double c = 0.1;
  double a = 0.5;
  double p_succ = 0.5;
  UtilityKind utility = UtilityKind::exp_saturating(2.0);
  ModifiedProducerRule producer_rule = ModifiedProducerRule::FinderShareOnly;
  std::optional<SweepRange> gamma_range;
  std::optional<SecondAxis> second_axis;
  double min_drop = 1e-6;
  SolverConfig solver;
  std::optional<std::string> out;
  std::string format = "csv";
};

inline SweepRange parse_range(const std::string& text) {
  const auto fields = detail::split(text, ':');
  if (fields.size() != 3) throw UsageError("range must be LO:HI:STEP, got '" + text + "'");
  SweepRange r;
  try {
    r.lo = parse_double(fields[0]);
    r.hi = parse_double(fields[1]);
    r.step = parse_double(fields[2]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad range: ") + e.what());
  }
  return r;
}

inline SecondAxis parse_second_axis(const std::string& text) {
  const size_t pos = text.find(':');
  if (pos == std::string::npos) {
    throw UsageError("second axis must be NAME:LO:HI:STEP, got '" + text + "'");
  }
  SecondAxis axis;
  axis.name = text.substr(0, pos);
  if (axis.name != "s" && axis.name != "c") {
    throw UsageError("second axis must be 's' or 'c', got '" + axis.name + "'");
  }
  axis.range = parse_range(text.substr(pos + 1));
  return axis;
}

inline UtilityKind parse_utility(const std::string& text) {
  const size_t pos = text.find(':');
  const std::string head = text.substr(0, pos);
  const std::string tail = pos == std::string::npos ? "" : text.substr(pos + 1);
  try {
    if (head == "linear" && tail.empty()) return UtilityKind::linear();
    if (head == "exp") return UtilityKind::exp_saturating(tail.empty() ? 2.0 : parse_double(tail));
    if (head == "cap") return UtilityKind::capped_linear(tail.empty() ? 1.0 : parse_double(tail));
  } catch (const std::exception& e) {
    throw UsageError("bad utility '" + text + "': " + e.what());
  }
  throw UsageError("utility must be linear, exp:RATE or cap:CAP, got '" + text + "'");
}

inline ModifiedProducerRule parse_producer_rule(const std::string& text) {
  if (text == "finder-share") return ModifiedProducerRule::FinderShareOnly;
  if (text == "full-find") return ModifiedProducerRule::FullFind;
  throw UsageError("producer rule must be finder-share or full-find, got '" + text + "'");
}

namespace config_detail {

// Applies one layer of settings (config file first, then flags) onto cfg.
inline void apply(RunConfig& cfg, const RawArgs& args) {
  if (args.game) cfg.game = *args.game;
  if (args.n) cfg.n = *args.n;
  if (args.s) cfg.s = *args.s;
  if (args.gamma) cfg.gamma = *args.gamma;
  if (args.c) cfg.c = *args.c;
  if (args.a) cfg.a = *args.a;
  if (args.p_succ) cfg.p_succ = *args.p_succ;
  if (args.utility) cfg.utility = parse_utility(*args.utility);
  if (args.producer_rule) cfg.producer_rule = parse_producer_rule(*args.producer_rule);
  if (args.gamma_range) cfg.gamma_range = parse_range(*args.gamma_range);
  if (args.second_axis) cfg.second_axis = parse_second_axis(*args.second_axis);
  if (args.min_drop) cfg.min_drop = *args.min_drop;
  if (args.grid_points) cfg.solver.grid_points = *args.grid_points;
  if (args.root_tol) cfg.solver.root_tol = *args.root_tol;
  if (args.gap_tol) cfg.solver.gap_tol = *args.gap_tol;
  if (args.out) cfg.out = *args.out;
  if (args.format) cfg.format = *args.format;
}

inline RawArgs from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");

  RawArgs args;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "game") args.game = value.get<std::string>();
      else if (key == "n") args.n = value.get<int>();
      else if (key == "s") args.s = value.get<double>();
      else if (key == "gamma") args.gamma = value.get<double>();
      else if (key == "c") args.c = value.get<double>();
      else if (key == "a") args.a = value.get<double>();
      else if (key == "p_succ") args.p_succ = value.get<double>();
      else if (key == "utility") args.utility = value.get<std::string>();
      else if (key == "producer_rule") args.producer_rule = value.get<std::string>();
      else if (key == "gamma_range") args.gamma_range = value.get<std::string>();
      else if (key == "second_axis") args.second_axis = value.get<std::string>();
      else if (key == "min_drop") args.min_drop = value.get<double>();
      else if (key == "grid_points") args.grid_points = value.get<int>();
      else if (key == "root_tol") args.root_tol = value.get<double>();
      else if (key == "gap_tol") args.gap_tol = value.get<double>();
      else if (key == "out") args.out = value.get<std::string>();
      else if (key == "format") args.format = value.get<std::string>();
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config key '" + key + "': " + std::string(e.what()));
    }
  }
  return args;
}

}  // namespace config_detail

// Defaults, then the config file, then explicit flags.
inline RunConfig resolve_config(const RawArgs& flags) {
  RunConfig cfg;
  bool s_explicit = flags.s.has_value();
  if (flags.config_path) {
    const RawArgs file = config_detail::from_config_file(*flags.config_path);
    s_explicit = s_explicit || file.s.has_value();
    config_detail::apply(cfg, file);
  }
  config_detail::apply(cfg, flags);
  if (cfg.game != "foraging" && cfg.game != "foraging-modified" && cfg.game != "company") {
    throw UsageError("game must be foraging, foraging-modified or company");
  }
  // The salary weight has a different customary default in the company game.
  if (!s_explicit && cfg.game == "company") cfg.s = 0.6;
  if (cfg.format != "csv" && cfg.format != "json") {
    throw UsageError("format must be csv or json");
  }
  if (cfg.second_axis && cfg.second_axis->name == "c" && cfg.game != "company") {
    throw UsageError("second axis 'c' is only meaningful for the company game");
  }
  return cfg;
}

struct FamilyBuild {
  GameFamily family;
  nlohmann::json echo;  // every parameter that affects the results
  bool extrapolation = false;
};

inline FamilyBuild build_family(const RunConfig& cfg) {
  FamilyBuild build;
  build.echo = {{"game", cfg.game},
                {"n", cfg.n},
                {"s", cfg.s},
                {"solver", {{"grid_points", cfg.solver.grid_points},
                            {"root_tol", cfg.solver.root_tol},
                            {"gap_tol", cfg.solver.gap_tol}}},
                {"min_drop", cfg.min_drop},
                {"tool_version", kVersion}};
  try {
    if (cfg.game == "foraging") {
      build.family = make_foraging_family(cfg.n, cfg.s);
      ForagingParams(cfg.n, cfg.s, 0.0);  // validate n, s eagerly
    } else if (cfg.game == "foraging-modified") {
      build.family = make_modified_foraging_family(cfg.n, cfg.s, cfg.producer_rule);
      ModifiedForagingParams(cfg.n, cfg.s, 0.0, cfg.producer_rule);
      build.echo["producer_rule"] =
          cfg.producer_rule == ModifiedProducerRule::FinderShareOnly ? "finder-share"
                                                                     : "full-find";
    } else {
      const CompanyParams base(cfg.n, 0.0, cfg.s, cfg.c, cfg.a, cfg.p_succ, cfg.utility);
      build.family = make_company_family(base);
      build.echo["c"] = cfg.c;
      build.echo["a"] = cfg.a;
      build.echo["p_succ"] = cfg.p_succ;
      build.echo["utility"] = cfg.utility.name();
      build.extrapolation = !cfg.utility.is_default_shape();
      build.echo["utility_extrapolation"] = build.extrapolation;
    }
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return build;
}

inline int run_ess(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!cfg.gamma) throw UsageError("ess requires --gamma");
    if (cfg.gamma_range) throw UsageError("ess takes a single --gamma, not --gamma-range");
    const FamilyBuild build = build_family(cfg);
    GameInstance game;
    try {
      game = build.family(*cfg.gamma);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
    const EssResult ess = find_ess(game, cfg.solver);
    out << "game: " << game.label << "\n";
    out << "classification: " << to_string(ess.kind) << "\n";
    if (ess.kind == EssKind::Degenerate) {
      out << "no ESS exists: every strategy earns the same payoff\n";
      return kExitDegenerate;
    }
    const VerifyResult verified = verify_ess(game, *ess.p_star, cfg.solver);
    out << "p_star: " << format_double(*ess.p_star) << "\n";
    out << "pi_star: " << format_double(*ess.pi_star) << "\n";
    if (ess.total_production) {
      out << "total_production: " << format_double(*ess.total_production) << "\n";
    }
    out << "verified: " << (verified ? "yes" : "no (" + verified.violation + ")") << "\n";
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

namespace config_detail {

inline std::vector<double> axis_values(const SweepRange& r) {
  if (!(r.step > 0.0) || !(r.lo < r.hi)) {
    throw UsageError("axis range requires lo < hi and step > 0");
  }
  std::vector<double> values;
  const long count = long(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
  values.reserve(count);
  for (long i = 0; i < count; ++i) values.push_back(r.lo + double(i) * r.step);
  return values;
}

inline RunConfig with_second(const RunConfig& cfg, const std::string& name, double value) {
  RunConfig copy = cfg;
  if (name == "s") copy.s = value;
  else copy.c = value;
  return copy;
}

inline nlohmann::json intervals_json(const std::vector<RcInterval>& intervals) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RcInterval& rc : intervals) {
    arr.push_back({{"gamma_lo", rc.gamma_lo}, {"gamma_hi", rc.gamma_hi}, {"drop", rc.drop}});
  }
  return arr;
}

}  // namespace config_detail

inline int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!cfg.gamma_range) throw UsageError("sweep requires --gamma-range LO:HI:STEP");
    if (!(cfg.gamma_range->step > 0.0) || !(cfg.gamma_range->lo < cfg.gamma_range->hi)) {
      throw UsageError("gamma range requires lo < hi and step > 0");
    }
    if (cfg.gamma_range->lo < 0.0) throw UsageError("gamma range must start at >= 0");

    SweepTable merged;
    nlohmann::json rc_report = nlohmann::json::array();
    nlohmann::json echo;
    if (cfg.second_axis) {
      merged.second_name = cfg.second_axis->name;
      for (double value : config_detail::axis_values(cfg.second_axis->range)) {
        const RunConfig slice = config_detail::with_second(cfg, cfg.second_axis->name, value);
        const FamilyBuild build = build_family(slice);
        if (echo.is_null()) {
          echo = build.echo;
          echo[cfg.second_axis->name] = "swept";
        }
        SweepTable table = sweep(build.family, cfg.gamma_range->lo, cfg.gamma_range->hi,
                                 cfg.gamma_range->step, cfg.solver);
        rc_report.push_back({{cfg.second_axis->name, value},
                             {"pi_star", config_detail::intervals_json(detect_rc(table, cfg.min_drop))},
                             {"total_production",
                              config_detail::intervals_json(detect_rc_production(table, cfg.min_drop))}});
        for (SweepRow row : table.rows) {
          row.second = value;
          merged.rows.push_back(row);
        }
        merged.metadata = table.metadata;
      }
    } else {
      const FamilyBuild build = build_family(cfg);
      echo = build.echo;
      merged = sweep(build.family, cfg.gamma_range->lo, cfg.gamma_range->hi,
                     cfg.gamma_range->step, cfg.solver);
      rc_report.push_back(
          {{"pi_star", config_detail::intervals_json(detect_rc(merged, cfg.min_drop))},
           {"total_production",
            config_detail::intervals_json(detect_rc_production(merged, cfg.min_drop))}});
    }

    merged.metadata["config"] = echo;
    merged.metadata["gamma_lo"] = cfg.gamma_range->lo;
    merged.metadata["gamma_hi"] = cfg.gamma_range->hi;
    merged.metadata["step"] = cfg.gamma_range->step;
    if (cfg.second_axis) {
      merged.metadata["second_axis"] = {{"name", cfg.second_axis->name},
                                        {"lo", cfg.second_axis->range.lo},
                                        {"hi", cfg.second_axis->range.hi},
                                        {"step", cfg.second_axis->range.step}};
    }
    merged.metadata["rc_intervals"] = rc_report;

    const std::string payload =
        cfg.format == "csv" ? to_csv(merged) : to_json(merged).dump(2) + "\n";
    if (cfg.out) {
      std::ofstream file(*cfg.out);
      if (!file) {
        err << "error: cannot write to '" << *cfg.out << "'\n";
        return kExitError;
      }
      file << payload;
      if (!file.good()) {
        err << "error: write failed for '" << *cfg.out << "'\n";
        return kExitError;
      }
    } else {
      out << payload;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::vector<PropertyResult> results;
    if (cfg.game == "foraging") {
      ForagingParams(cfg.n, cfg.s, 0.0);
      results = foraging_property_suite(cfg.n, cfg.s);
    } else if (cfg.game == "foraging-modified") {
      ModifiedForagingParams(cfg.n, cfg.s, 0.0, cfg.producer_rule);
      results = modified_foraging_property_suite(cfg.n, cfg.s, cfg.producer_rule);
    } else {
      const CompanyParams base(cfg.n, cfg.gamma.value_or(1.0), cfg.s, cfg.c, cfg.a,
                               cfg.p_succ, cfg.utility);
      results = company_property_suite(base);
    }
    bool all_pass = true;
    for (const PropertyResult& r : results) {
      all_pass &= r.pass;
      out << (r.pass ? "PASS " : "FAIL ") << r.name
          << " (worst error " << format_double(r.worst_error) << ")";
      if (!r.detail.empty()) out << " -- " << r.detail;
      out << "\n";
    }
    out << (all_pass ? "all properties passed\n" : "some properties FAILED\n");
    return all_pass ? kExitOk : kExitError;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace psgames::cli

#endif  // PSGAMES_CLI_HPP
