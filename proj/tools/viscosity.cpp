#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "visc/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Viscosity approximation solvers and experiment harness"};
  app.require_subcommand(1);

  visc::CliRequest request;
  std::string config;
  std::string replay;
  std::string report;
  std::vector<std::string> positional;
  struct Flag {
    const char* name;
    const char* help;
    std::string value;
  };
  std::vector<Flag> flags{{"out", "Output directory (default $VISC_OUT_DIR or ./out)", {}},
                          {"theta", "alpha_k = k^-theta (experiment: single theta)", {}},
                          {"thetas", "Comma-separated theta list for experiment/tables", {}},
                          {"seed", "Perturbation seed (experiment: single seed)", {}},
                          {"seeds", "Comma-separated seed list for experiment/tables", {}},
                          {"nmax", "Iteration budget", {}},
                          {"algorithm", "explicit|perturbed|takahashi_toyoda|halpern|yao_outer|yao_inner", {}},
                          {"stride", "Record every stride-th trace row", {}},
                          {"epsilons", "Comma-separated N(eps) thresholds", {}}};
  bool deterministic = false;

  for (const char* name : {"solve", "implicit", "experiment", "tables", "check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--replay", replay, "Metadata file of a previous run to reproduce");
    for (Flag& f : flags) sub->add_option(std::string("--") + f.name, f.value, f.help);
    sub->add_flag("--deterministic", deterministic, "Drop the perturbation (e = 0)");
    if (std::string(name) == "tables") {
      sub->add_option("--report", report, "Rebuild tables from this report.csv");
    }
    sub->add_option("overrides", positional, "key=value overrides");
    sub->callback([&request, name] { request.command = visc::parse_command(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : visc::kExitConfig;
  }

  try {
    if (!config.empty()) request.config_path = config;
    if (!replay.empty()) request.replay = replay;
    if (!report.empty()) request.report = report;
    for (const std::string& p : positional) request.overrides.push_back(visc::parse_override(p));
    for (const Flag& f : flags) {
      if (!f.value.empty()) request.overrides.emplace_back(f.name, f.value);
    }
    if (deterministic) request.overrides.emplace_back("deterministic", "true");
  } catch (const visc::Error& e) {
    std::cerr << e.what() << "\n";
    return visc::exit_code_for(e.kind());
  }
  return visc::run_command(request, std::cout, std::cerr);
}
