#include "visc/commands.hpp"

#include <cstdlib>
#include <sstream>

#include "visc/digest.hpp"
#include "visc/experiment.hpp"
#include "visc/properties.hpp"
#include "visc/trace_io.hpp"

namespace visc {

namespace {

namespace fs = std::filesystem;

std::string fmt_vector(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + ")";
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
  return s;
}

std::string implicit_describe(const ParsedConfig& cfg) {
  const ImplicitConfig& c = cfg.implicit;
  std::ostringstream os;
  os << "t_values=" << join(c.t_values) << ";lambda=" << format_double(cfg.implicit_lambda)
     << ";bounds=[" << format_double(c.a) << "," << format_double(c.b)
     << "];inner_tol=" << format_double(c.inner_tol) << ";inner_max_iter=" << c.inner_max_iter
     << ";x1=" << join({c.x1.begin(), c.x1.end()}) << ";problem=" << cfg.problem.describe();
  return os.str();
}

/// Lines shared by every command's metadata file.
std::string common_meta(Command c, const ParsedConfig& cfg) {
  std::ostringstream os;
  os << "command=" << to_string(c) << "\n";
  os << "config_file=" << (cfg.source ? fs::absolute(*cfg.source).string() : std::string("none")) << "\n";
  if (cfg.seed_generated) os << "generated_seed=true\n";
  for (const auto& [path, value] : cfg.defaults) os << "default." << path << "=" << value << "\n";
  return os.str();
}

void print_warnings(const std::vector<Warning>& warnings, std::ostream& err) {
  for (const Warning& w : warnings) {
    err << "warning: " << w.message << (w.count > 1 ? " (x" + std::to_string(w.count) + ")" : "") << "\n";
  }
}

ParsedConfig load(const CliRequest& request, std::optional<std::string>& expected_digest) {
  Overrides overrides;
  std::optional<fs::path> config_path = request.config_path;
  if (request.replay) {
    for (const auto& [key, value] : parse_meta_text(read_text_file(*request.replay))) {
      if (key == "command") {
        if (value != to_string(request.command)) {
          throw Error(ErrorKind::Configuration,
                      "replay file was written by '" + value + "', not '" + to_string(request.command) + "'");
        }
      } else if (key == "config_file") {
        if (!config_path && value != "none") config_path = value;
      } else if (key == "config_digest") {
        expected_digest = value;
      } else if (key == "prng") {
        if (value != kPrngName) throw Error(ErrorKind::Configuration, "replay needs prng " + value);
      } else if (is_informational_meta_key(key)) {
        continue;
      } else if (is_override_key(key)) {
        if (key == "seed" && value == "none") continue;
        overrides.emplace_back(key, value);
      } else {
        throw Error(ErrorKind::Configuration, "replay file has unknown key '" + key + "'");
      }
    }
  }
  overrides.insert(overrides.end(), request.overrides.begin(), request.overrides.end());
  if (config_path) return parse_config(*config_path, overrides);
  return parse_config_text("{}", overrides, "<defaults>");
}

int solve(const ParsedConfig& cfg, const fs::path& dir, std::ostream& out, std::ostream& err) {
  RunOptions options;
  options.stride = cfg.stride;
  const RunTrace trace = run(cfg.solver, options);
  print_warnings(trace.metadata.warnings, err);

  std::ostringstream extra;
  extra << "nmax=" << cfg.solver.n_max << "\n";
  extra << "stride=" << cfg.stride << "\n";
  extra << "deterministic="
        << (std::holds_alternative<NoPerturbation>(cfg.solver.perturbation) ? "true" : "false") << "\n";
  if (const auto* p = std::get_if<PowerAlpha>(&cfg.solver.schedule.alpha())) {
    extra << "theta=" << format_double(p->theta) << "\n";
  }
  const fs::path csv = dir / "trace.csv";
  write_text_file(csv, trace_csv(trace));
  write_text_file(dir / "trace.csv.meta",
                  trace_metadata_text(trace) + extra.str() + common_meta(Command::Solve, cfg));

  if (cfg.seed_generated) out << "generated seed=" << *trace.metadata.seed << "\n";
  out << "algorithm=" << trace.metadata.algorithm << " iterations=" << trace.metadata.iterations
      << (trace.metadata.stopped_early ? " (target reached)" : "") << "\n";
  out << "final_x=" << fmt_vector(trace.final_x) << "\n";
  if (trace.min_rel_err) {
    out << "min_rel_err=" << format_double(*trace.min_rel_err) << " at k=" << *trace.argmin_k << "\n";
  }
  out << "wrote " << csv.string() << "\n";
  return kExitOk;
}

int implicit(const ParsedConfig& cfg, const fs::path& dir, std::ostream& out) {
  const std::vector<ImplicitSolution> path = implicit_path(cfg.implicit, cfg.problem, cfg.solver.reference);
  const std::size_t d = cfg.problem.dim();
  std::string csv = "t,lambda";
  for (std::size_t i = 1; i <= d; ++i) csv += ",x" + std::to_string(i);
  csv += ",residual,iterations,distance_to_qstar\n";
  for (const ImplicitSolution& s : path) {
    csv += format_double(s.t) + "," + format_double(s.lambda);
    for (double v : s.x) csv += "," + format_double(v);
    csv += "," + format_double(s.residual) + "," + std::to_string(s.iterations) + ",";
    if (s.distance_to_reference) csv += format_double(*s.distance_to_reference);
    csv += "\n";
    out << "t=" << format_double(s.t) << " x=" << fmt_vector(s.x) << " residual=" << format_double(s.residual)
        << " iterations=" << s.iterations;
    if (s.distance_to_reference) out << " |x-q*|=" << format_double(*s.distance_to_reference);
    out << "\n";
  }
  const std::string text = implicit_describe(cfg);
  write_text_file(dir / "implicit.csv", csv);
  write_text_file(dir / "implicit.meta", "config_digest=" + config_digest(text) + "\nconfig=" + text + "\n" +
                                             common_meta(Command::Implicit, cfg));
  out << "wrote " << (dir / "implicit.csv").string() << "\n";
  return kExitOk;
}

int experiment(const ParsedConfig& cfg, const fs::path& dir, bool traces, std::ostream& out,
               std::ostream& err) {
  const ExperimentReport report =
      run_experiment(cfg.experiment, traces ? std::optional<fs::path>(dir / "traces") : std::nullopt);
  std::size_t failures = 0;
  for (const ExperimentCell& c : report.cells) {
    if (c.failure) {
      ++failures;
      err << "cell theta=" << format_double(c.theta)
          << " seed=" << (c.seed ? std::to_string(*c.seed) : std::string("deterministic"))
          << " failed: " << *c.failure << "\n";
    }
  }
  write_report(report, cfg.experiment.seeds, dir);
  write_text_file(dir / "meta.txt", experiment_metadata_text(report, cfg.experiment.seeds) +
                                        common_meta(traces ? Command::Experiment : Command::Tables, cfg));
  for (const RenderedTable& t : emit_tables(report)) out << t.text << "\n";
  out << "wrote " << dir.string() << "\n";
  if (failures == report.cells.size()) {
    err << "every cell failed\n";
    return kExitDivergence;
  }
  return kExitOk;
}

int tables_from_report(const fs::path& report_path, const fs::path& dir, std::ostream& out) {
  const ExperimentReport report = parse_report_csv(read_text_file(report_path));
  std::string text;
  for (const RenderedTable& t : emit_tables(report)) {
    write_text_file(dir / (t.name + ".csv"), t.csv);
    text += t.text + "\n";
  }
  write_text_file(dir / "tables.txt", text);
  out << text << "wrote " << dir.string() << "\n";
  return kExitOk;
}

int check(const ParsedConfig& cfg, std::ostream& out) {
  const HypothesisReport hyp = hypothesis_report(cfg.solver.schedule, cfg.solver.perturbation,
                                                 cfg.solver.n_max, cfg.problem.nu(), cfg.problem.dim());
  out << "hypotheses (horizon " << hyp.evidence.horizon << "):\n";
  for (const HypothesisCheck& c : hyp.checks) {
    out << "  (" << c.id << ") " << to_string(c.verdict) << ": " << c.statement << " [" << c.evidence << "]\n";
  }
  const PropertyReport props = run_property_suite(cfg.problem);
  out << "properties:\n";
  std::istringstream lines(props.text());
  for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
  const bool ok = hyp.all_satisfied() && props.all_passed();
  out << (ok ? "check passed" : "check found violations") << "\n";
  return ok ? kExitOk : kExitOther;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "implicit") return Command::Implicit;
  if (name == "experiment") return Command::Experiment;
  if (name == "tables") return Command::Tables;
  if (name == "check") return Command::Check;
  throw Error(ErrorKind::Configuration,
              "unknown command '" + name + "' (solve, implicit, experiment, tables, check)");
}

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Implicit: return "implicit";
    case Command::Experiment: return "experiment";
    case Command::Tables: return "tables";
    case Command::Check: return "check";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Configuration:
    case ErrorKind::Parameter:
    case ErrorKind::InvalidDescriptor:
    case ErrorKind::Dimension:
    case ErrorKind::Registry:
    case ErrorKind::Index:
    case ErrorKind::ScheduleViolation:
      return kExitConfig;
    case ErrorKind::Divergence:
    case ErrorKind::NonConvergence:
    case ErrorKind::NonFinite:
      return kExitDivergence;
    case ErrorKind::Io:
      return kExitIo;
  }
  return kExitOther;
}

fs::path output_dir(const ParsedConfig& cfg) {
  if (cfg.out) return *cfg.out;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "out";
}

std::string command_digest(Command c, const ParsedConfig& cfg) {
  switch (c) {
    case Command::Experiment:
    case Command::Tables:
      return config_digest(cfg.experiment.describe());
    case Command::Implicit:
      return config_digest(implicit_describe(cfg));
    case Command::Solve:
    case Command::Check:
      break;
  }
  return config_digest(cfg.solver.describe());
}

int run_command(const CliRequest& request, std::ostream& out, std::ostream& err) {
  try {
    std::optional<std::string> expected_digest;
    const ParsedConfig cfg = load(request, expected_digest);
    if (expected_digest && *expected_digest != command_digest(request.command, cfg)) {
      throw Error(ErrorKind::Configuration, "replay does not reproduce config digest " + *expected_digest +
                                                " (got " + command_digest(request.command, cfg) + ")");
    }
    const fs::path dir = output_dir(cfg);
    switch (request.command) {
      case Command::Solve: return solve(cfg, dir, out, err);
      case Command::Implicit: return implicit(cfg, dir, out);
      case Command::Experiment: return experiment(cfg, dir, true, out, err);
      case Command::Tables:
        return request.report ? tables_from_report(*request.report, dir, out)
                              : experiment(cfg, dir, false, out, err);
      case Command::Check: return check(cfg, out);
    }
    return kExitOther;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace visc
