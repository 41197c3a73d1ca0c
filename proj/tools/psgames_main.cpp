#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psgames/cli.hpp"

namespace {

// Shared flag set; each subcommand records what the user actually passed so
// that flags can override the config file.
void add_common_flags(CLI::App* cmd, psgames::cli::RawArgs* args) {
  const auto opt_str = [cmd](const char* name, std::optional<std::string>* slot,
                             const char* help) {
    cmd->add_option_function<std::string>(
        name, [slot](const std::string& v) { *slot = v; }, help);
  };
  const auto opt_int = [cmd](const char* name, std::optional<int>* slot, const char* help) {
    cmd->add_option_function<int>(name, [slot](int v) { *slot = v; }, help);
  };
  const auto opt_dbl = [cmd](const char* name, std::optional<double>* slot, const char* help) {
    cmd->add_option_function<double>(name, [slot](double v) { *slot = v; }, help);
  };

  opt_str("--game", &args->game, "Game family: foraging | foraging-modified | company");
  opt_int("--n", &args->n, "Group size (>= 2)");
  opt_dbl("--s", &args->s, "Finder's share (foraging) or salary weight (company)");
  opt_dbl("--gamma", &args->gamma, "Production capacity parameter");
  opt_dbl("--c", &args->c, "Producer cost (company)");
  opt_dbl("--a", &args->a, "Scrounger quality factor (company)");
  opt_dbl("--p-succ", &args->p_succ, "Production success probability (company)");
  opt_str("--utility", &args->utility, "Utility: linear | exp:RATE | cap:CAP");
  opt_str("--producer-rule", &args->producer_rule,
          "Modified-game producer payoff: finder-share | full-find");
  opt_str("--gamma-range", &args->gamma_range, "Sweep range LO:HI:STEP");
  opt_str("--second-axis", &args->second_axis, "Second sweep axis NAME:LO:HI:STEP (s or c)");
  opt_dbl("--min-drop", &args->min_drop, "Minimum cumulative payoff drop for an RC interval");
  opt_int("--grid-points", &args->grid_points, "Solver grid points (>= 3)");
  opt_dbl("--root-tol", &args->root_tol, "Bisection tolerance for the ESS root");
  opt_dbl("--gap-tol", &args->gap_tol, "Indifference tolerance for the payoff gap");
  opt_str("--out", &args->out, "Output path (stdout when omitted)");
  opt_str("--format", &args->format, "Output format: csv | json");
  opt_str("--config", &args->config_path, "JSON config file mirroring the flags");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Producer-scrounger game ESS computation and gamma sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("psgames ") + psgames::kVersion);

  psgames::cli::RawArgs ess_args, sweep_args, verify_args;
  CLI::App* ess = app.add_subcommand("ess", "Compute the ESS for a single parameter set");
  add_common_flags(ess, &ess_args);
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep gamma and emit a CSV/JSON table");
  add_common_flags(sweep, &sweep_args);
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites for a game");
  add_common_flags(verify, &verify_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return psgames::cli::kExitUsage;
  }

  try {
    if (ess->parsed()) {
      return psgames::cli::run_ess(psgames::cli::resolve_config(ess_args), std::cout, std::cerr);
    }
    if (sweep->parsed()) {
      return psgames::cli::run_sweep(psgames::cli::resolve_config(sweep_args), std::cout,
                                     std::cerr);
    }
    return psgames::cli::run_verify(psgames::cli::resolve_config(verify_args), std::cout,
                                    std::cerr);
  } catch (const psgames::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return psgames::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return psgames::cli::kExitError;
  }
}
