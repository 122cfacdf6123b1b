#include "visc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "visc/digest.hpp"
#include "visc/error.hpp"
#include "visc/schedules.hpp"
#include "visc/solvers.hpp"
#include "visc/trace_io.hpp"

namespace visc {

namespace {

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Io, "report.csv: cannot parse " + what + " '" + s + "'");
  }
}

std::string hit_text(const std::optional<std::size_t>& hit) {
  return hit ? std::to_string(*hit) : std::string("ND");
}

/// Column-aligned text rendering.
std::string render_text(const std::string& title, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  os << title << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << (c ? "  " : "") << std::string(width[c] - cells[c].size(), ' ') << cells[c];
    }
    os << "\n";
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  os << std::string(total + 2 * (width.size() - 1), '-') << "\n";
  for (const auto& row : rows) line(row);
  return os.str();
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out + "\n";
}

RenderedTable min_error_table(const std::string& name, const std::string& title,
                              const std::vector<const ThetaSummary*>& rows) {
  const std::vector<std::string> header{"theta", "median_min_rel_err", "min", "max", "runs",
                                        "failures"};
  std::vector<std::vector<std::string>> body;
  for (const ThetaSummary* s : rows) {
    auto num = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
    body.push_back({format_double(s->theta), num(s->median), num(s->min), num(s->max),
                    std::to_string(s->runs), std::to_string(s->failures)});
  }
  RenderedTable t{name, csv_line(header), render_text(title, header, body)};
  for (const auto& row : body) t.csv += csv_line(row);
  return t;
}

}  // namespace

Problem benchmark_problem() {
  return Problem(ConvexSet::orthant(2), Mapping::identity(2),
                 Mapping::least_squares_gradient(Matrix{{1.0, 1.0}, {2.0, 2.0}}, Vector{3.0, 5.0}),
                 Mapping::trig_contraction(), ConvexSet::simplex(2, 2.6));
}

Vector benchmark_start() { return Vector{2.0, 3.0}; }

std::vector<double> default_thetas() { return {0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 0.9, 1.0}; }

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> seeds(20);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  return seeds;
}

std::vector<double> default_epsilons() { return {0.5, 0.10, 0.05, 0.01, 0.005, 0.001}; }

void ExperimentConfig::validate() const {
  if (thetas.empty()) throw Error(ErrorKind::Parameter, "experiment needs at least one theta");
  for (double t : thetas) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorKind::Parameter, "thetas must lie in (0, 1]");
  }
  if (!deterministic && seeds.empty()) {
    throw Error(ErrorKind::Parameter, "experiment needs at least one seed");
  }
  if (n_max == 0) throw Error(ErrorKind::Parameter, "n_max must be >= 1");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw Error(ErrorKind::Parameter, "epsilons must be positive");
  }
  if (!problem.omega()) {
    throw Error(ErrorKind::Configuration, "experiment needs a problem with a known Omega");
  }
  if (z1.dim() != problem.dim()) throw Error(ErrorKind::Dimension, "z1 has wrong dimension");
}

std::string ExperimentConfig::describe() const {
  std::ostringstream os;
  os << "thetas=" << join_doubles(thetas) << ";seeds=";
  if (deterministic) {
    os << "none";
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "," : "") << seeds[i];
  }
  os << ";nmax=" << n_max << ";epsilons=" << join_doubles(epsilons)
     << ";problem=" << problem.describe() << ";z1=" << join_doubles({z1.begin(), z1.end()})
     << ";lambda=" << format_double(lambda) << ";deterministic=" << (deterministic ? 1 : 0)
     << ";qstar_tol=" << format_double(qstar_tol) << ";prng=" << kPrngName;
  return os.str();
}

std::optional<std::size_t> first_hit(const std::vector<double>& rel_err, double eps) {
  for (std::size_t i = 0; i < rel_err.size(); ++i) {
    if (rel_err[i] <= eps) return i + 1;
  }
  return std::nullopt;
}

void summarize(ExperimentReport& report) {
  report.summary.clear();
  for (double theta : report.thetas) {
    ThetaSummary s;
    s.theta = theta;
    std::vector<double> mins;
    std::vector<std::vector<std::optional<std::size_t>>> hits(report.epsilons.size());
    for (const ExperimentCell& c : report.cells) {
      if (c.theta != theta) continue;
      if (c.failure) {
        ++s.failures;
        continue;
      }
      ++s.runs;
      mins.push_back(c.min_rel_err);
      for (std::size_t e = 0; e < report.epsilons.size() && e < c.first_hit.size(); ++e) {
        hits[e].push_back(c.first_hit[e]);
      }
    }
    if (!mins.empty()) {
      std::sort(mins.begin(), mins.end());
      const std::size_t n = mins.size();
      s.median = n % 2 ? mins[n / 2] : 0.5 * (mins[n / 2 - 1] + mins[n / 2]);
      s.min = mins.front();
      s.max = mins.back();
    }
    for (auto& h : hits) {
      if (h.empty()) {
        s.first_hit_median.emplace_back();
        continue;
      }
      std::sort(h.begin(), h.end(), [](const auto& a, const auto& b) {
        const std::size_t inf = std::numeric_limits<std::size_t>::max();
        return a.value_or(inf) < b.value_or(inf);
      });
      s.first_hit_median.push_back(h[(h.size() - 1) / 2]);
    }
    report.summary.push_back(std::move(s));
  }
}

std::string trace_file_name(double theta, std::optional<std::uint64_t> seed) {
  return "theta_" + format_double(theta) + "_seed_" +
         (seed ? std::to_string(*seed) : std::string("deterministic")) + ".csv";
}

ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::optional<std::filesystem::path>& trace_dir) {
  cfg.validate();
  ExperimentReport report;
  report.thetas = cfg.thetas;
  report.epsilons = cfg.epsilons;
  report.n_max = cfg.n_max;
  report.deterministic = cfg.deterministic;
  report.table_split = cfg.table_split;
  report.config = cfg.describe();
  report.config_digest = config_digest(report.config);
  const Vector qstar = reference_qstar(cfg.problem, cfg.qstar_tol);
  report.qstar = qstar;

  std::vector<std::optional<std::uint64_t>> seeds;
  if (cfg.deterministic) {
    seeds.emplace_back();
  } else {
    seeds.assign(cfg.seeds.begin(), cfg.seeds.end());
  }

  for (double theta : cfg.thetas) {
    for (const auto& seed : seeds) {
      ExperimentCell cell{};
      cell.theta = theta;
      cell.seed = seed;
      PerturbationSpec pert = NoPerturbation{};
      if (seed) pert = UniformSquareOverKsq{*seed};
      try {
        SolverConfig sc{.algorithm = Perturbed{},
                        .problem = cfg.problem,
                        .schedule = ScheduleSpec::power(theta, cfg.lambda),
                        .perturbation = pert,
                        .x1 = cfg.z1,
                        .n_max = cfg.n_max,
                        .reference = qstar,
                        .stop = std::nullopt};
        RunOptions opts;
        cell.rel_err.reserve(cfg.n_max);
        opts.observer = [&cell](const TraceRow& row) { cell.rel_err.push_back(*row.rel_err); };
        const RunTrace trace = run(sc, opts);
        cell.min_rel_err = *trace.min_rel_err;
        cell.argmin_k = *trace.argmin_k;
        for (double eps : cfg.epsilons) cell.first_hit.push_back(first_hit(cell.rel_err, eps));
        if (trace_dir) {
          const std::filesystem::path path = *trace_dir / trace_file_name(theta, seed);
          emit_trace(trace, path);
          cell.trace_path = path;
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        cell.failure = e.what();
      }
      report.cells.push_back(std::move(cell));
    }
  }
  summarize(report);
  return report;
}

std::vector<RenderedTable> emit_tables(const ExperimentReport& report) {
  if (report.summary.empty()) throw Error(ErrorKind::Parameter, "emit_tables needs a nonempty report");
  std::vector<const ThetaSummary*> small, large;
  for (const ThetaSummary& s : report.summary) {
    (s.theta < report.table_split ? small : large).push_back(&s);
  }
  std::vector<RenderedTable> tables;
  tables.push_back(min_error_table("table1", "min_k rel_err for small theta", small));
  tables.push_back(min_error_table("table2", "min_k rel_err for theta near 1", large));
  if (report.epsilons.empty()) return tables;

  const std::vector<const ThetaSummary*>& cols = large.empty() ? small : large;
  std::vector<std::string> header{"epsilon"};
  for (const ThetaSummary* s : cols) header.push_back("theta_" + format_double(s->theta));
  std::vector<std::vector<std::string>> body;
  for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
    std::vector<std::string> row{format_double(report.epsilons[e])};
    for (const ThetaSummary* s : cols) {
      row.push_back(e < s->first_hit_median.size() ? hit_text(s->first_hit_median[e]) : "ND");
    }
    body.push_back(std::move(row));
  }
  RenderedTable t{"table3", csv_line(header),
                  render_text("N(eps, theta): first k with rel_err_k <= eps (ND: never)", header,
                              body)};
  for (const auto& row : body) t.csv += csv_line(row);
  tables.push_back(std::move(t));
  return tables;
}

std::string report_csv(const ExperimentReport& report) {
  std::vector<std::string> header{"theta", "seed", "min_rel_err", "argmin_k"};
  for (double e : report.epsilons) header.push_back("N_" + format_double(e));
  header.push_back("status");
  std::string out = csv_line(header);
  for (const ExperimentCell& c : report.cells) {
    std::vector<std::string> row{format_double(c.theta),
                                 c.seed ? std::to_string(*c.seed) : std::string("deterministic")};
    if (c.failure) {
      row.insert(row.end(), {"NA", "NA"});
      for (std::size_t e = 0; e < report.epsilons.size(); ++e) row.emplace_back("NA");
      row.push_back("failed: " + sanitize(*c.failure));
    } else {
      row.push_back(format_double(c.min_rel_err));
      row.push_back(std::to_string(c.argmin_k));
      for (const auto& h : c.first_hit) row.push_back(hit_text(h));
      row.emplace_back("ok");
    }
    out += csv_line(row);
  }
  return out;
}

ExperimentReport parse_report_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Io, "report.csv is empty");
  const std::vector<std::string> header = split(line, ',');
  if (header.size() < 5 || header[0] != "theta" || header[1] != "seed" ||
      header[2] != "min_rel_err" || header[3] != "argmin_k" || header.back() != "status") {
    throw Error(ErrorKind::Io, "report.csv has an unexpected header");
  }
  ExperimentReport report;
  for (std::size_t i = 4; i + 1 < header.size(); ++i) {
    if (header[i].rfind("N_", 0) != 0) throw Error(ErrorKind::Io, "bad column " + header[i]);
    report.epsilons.push_back(parse_double(header[i].substr(2), "epsilon"));
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != header.size()) throw Error(ErrorKind::Io, "report.csv: ragged row");
    ExperimentCell c{};
    c.theta = parse_double(f[0], "theta");
    if (f[1] == "deterministic") {
      report.deterministic = true;
    } else {
      c.seed = static_cast<std::uint64_t>(parse_double(f[1], "seed"));
    }
    if (f.back() != "ok") {
      c.failure = f.back();
    } else {
      c.min_rel_err = parse_double(f[2], "min_rel_err");
      c.argmin_k = static_cast<std::size_t>(parse_double(f[3], "argmin_k"));
      for (std::size_t i = 4; i + 1 < f.size(); ++i) {
        if (f[i] == "ND") {
          c.first_hit.emplace_back();
        } else {
          c.first_hit.emplace_back(static_cast<std::size_t>(parse_double(f[i], "N(eps)")));
        }
      }
    }
    if (std::find(report.thetas.begin(), report.thetas.end(), c.theta) == report.thetas.end()) {
      report.thetas.push_back(c.theta);
    }
    report.cells.push_back(std::move(c));
  }
  summarize(report);
  return report;
}

std::string convergence_series_csv(const ExperimentReport& report) {
  std::string out = "k";
  std::vector<std::vector<const ExperimentCell*>> by_theta;
  std::size_t length = 0;
  for (double theta : report.thetas) {
    out += ",theta_" + format_double(theta);
    std::vector<const ExperimentCell*> cells;
    for (const ExperimentCell& c : report.cells) {
      if (c.theta == theta && !c.failure && !c.rel_err.empty()) {
        cells.push_back(&c);
        length = std::max(length, c.rel_err.size());
      }
    }
    by_theta.push_back(std::move(cells));
  }
  out += "\n";
  std::vector<double> column;
  for (std::size_t k = 1; k <= length; ++k) {
    out += std::to_string(k);
    for (const auto& cells : by_theta) {
      column.clear();
      for (const ExperimentCell* c : cells) {
        if (k <= c->rel_err.size()) column.push_back(c->rel_err[k - 1]);
      }
      out += ",";
      if (column.empty()) continue;
      std::sort(column.begin(), column.end());
      const std::size_t n = column.size();
      out += format_double(n % 2 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]));
    }
    out += "\n";
  }
  return out;
}

std::string experiment_metadata_text(const ExperimentReport& report,
                                      const std::vector<std::uint64_t>& seeds) {
  std::ostringstream os;
  os << "prng=" << kPrngName << "\n";
  os << "thetas=" << join_doubles(report.thetas) << "\n";
  if (!report.deterministic) {
    os << "seeds=";
    for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "," : "") << seeds[i];
    os << "\n";
  }
  os << "nmax=" << report.n_max << "\n";
  os << "deterministic=" << (report.deterministic ? "true" : "false") << "\n";
  os << "epsilons=" << join_doubles(report.epsilons) << "\n";
  if (report.qstar) {
    os << "qstar=" << join_doubles({report.qstar->begin(), report.qstar->end()}) << "\n";
  }
  os << "config_digest=" << report.config_digest << "\n";
  os << "config=" << report.config << "\n";
  return os.str();
}

void write_report(const ExperimentReport& report, const std::vector<std::uint64_t>& seeds,
                  const std::filesystem::path& dir) {
  write_text_file(dir / "report.csv", report_csv(report));
  std::string text;
  for (const RenderedTable& t : emit_tables(report)) {
    write_text_file(dir / (t.name + ".csv"), t.csv);
    text += t.text + "\n";
  }
  write_text_file(dir / "tables.txt", text);
  write_text_file(dir / "figure1.csv", convergence_series_csv(report));
  write_text_file(dir / "meta.txt", experiment_metadata_text(report, seeds));
}

}  // namespace visc
