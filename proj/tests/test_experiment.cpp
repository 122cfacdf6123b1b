#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "visc/error.hpp"
#include "visc/experiment.hpp"
#include "visc/projections.hpp"
#include "visc/solvers.hpp"
#include "visc/trace_io.hpp"

using namespace visc;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("visc_test_experiment_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const fs::path& f : files) all += fs::relative(f, dir).string() + "\n" + read_text_file(f);
  return all;
}

const ExperimentCell& cell_for(const ExperimentReport& r, double theta) {
  for (const ExperimentCell& c : r.cells) {
    if (c.theta == theta) return c;
  }
  FAIL("missing theta " << theta);
  return r.cells.front();
}

}  // namespace

TEST_CASE("benchmark instance") {
  const Problem p = benchmark_problem();
  CHECK(p.nu() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(p.rho() == doctest::Approx(std::sqrt(2.0) / 2.0));
  REQUIRE(p.omega().has_value());
  CHECK(contains(*p.omega(), Vector{0.8, 1.8}, 1e-12));
  CHECK_FALSE(contains(*p.omega(), Vector{1.0, 1.0}, 1e-12));
  CHECK(benchmark_start() == Vector{2.0, 3.0});
  const Vector q = reference_qstar(p);
  CHECK(q[0] == doctest::Approx(0.96465).epsilon(1e-4));
  CHECK(q[1] == doctest::Approx(1.63535).epsilon(1e-4));
  CHECK(default_thetas() == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 0.9, 1.0});
  CHECK(default_seeds().size() == 20);
  CHECK(default_epsilons() == std::vector<double>{0.5, 0.1, 0.05, 0.01, 0.005, 0.001});
}

TEST_CASE("first_hit definition") {
  const std::vector<double> e{0.9, 0.4, 0.6, 0.05, 0.01};
  CHECK(first_hit(e, 0.5) == std::optional<std::size_t>(2));
  CHECK(first_hit(e, 0.05) == std::optional<std::size_t>(4));
  CHECK(first_hit(e, 0.4) == std::optional<std::size_t>(2));
  CHECK_FALSE(first_hit(e, 0.001).has_value());
  CHECK_FALSE(first_hit({}, 0.5).has_value());
}

TEST_CASE("deterministic sweep matches frozen baselines") {
  ExperimentConfig cfg;
  cfg.deterministic = true;
  const ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.cells.size() == 8);
  // Values from an independent double-precision reimplementation of the scheme.
  const std::vector<std::pair<double, double>> frozen{
      {0.1, 0.47736758055914197}, {0.2, 0.18094545339484788}, {0.3, 0.07420862189125306},
      {0.4, 0.03092726898129284}, {0.6, 0.0054446662675371642}, {0.8, 0.0010047679204867907},
      {0.9, 0.00050327309089821001}, {1.0, 0.00074971666795153034}};
  for (const auto& [theta, value] : frozen) {
    CAPTURE(theta);
    CHECK(cell_for(r, theta).min_rel_err == doctest::Approx(value).epsilon(1e-12));
    CHECK_FALSE(cell_for(r, theta).seed.has_value());
  }
  using H = std::vector<std::optional<std::size_t>>;
  const std::optional<std::size_t> nd;
  CHECK(cell_for(r, 0.6).first_hit == H{6, 53, 158, 2192, nd, nd});
  CHECK(cell_for(r, 0.8).first_hit == H{5, 24, 56, 371, 850, nd});
  CHECK(cell_for(r, 0.9).first_hit == H{4, 18, 44, 262, 543, 2912});
  CHECK(cell_for(r, 1.0).first_hit == H{4, 14, 36, 283, 656, 4316});

  for (const ExperimentCell& c : r.cells) {
    REQUIRE(c.rel_err.size() == 6000);
    CHECK(c.rel_err[c.argmin_k - 1] == c.min_rel_err);
    CHECK(*std::min_element(c.rel_err.begin(), c.rel_err.end()) == c.min_rel_err);
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) CHECK(c.first_hit[i] == first_hit(c.rel_err, cfg.epsilons[i]));
  }
  // Faster schedules reach smaller errors across the small-θ range.
  for (std::size_t i = 1; i < 4; ++i) CHECK(r.cells[i].min_rel_err < r.cells[i - 1].min_rel_err);
  REQUIRE(r.qstar.has_value());
  CHECK(distance(*r.qstar, reference_qstar(benchmark_problem())) == 0.0);
}

TEST_CASE("summaries and tables") {
  ExperimentConfig cfg;
  cfg.thetas = {0.2, 0.9};
  cfg.seeds = {1, 2, 3, 4};
  cfg.n_max = 500;
  cfg.epsilons = {0.5, 0.1};
  ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.cells.size() == 8);
  REQUIRE(r.summary.size() == 2);
  for (const ThetaSummary& s : r.summary) {
    std::vector<double> v;
    for (const ExperimentCell& c : r.cells) {
      if (c.theta == s.theta) v.push_back(c.min_rel_err);
    }
    std::sort(v.begin(), v.end());
    CHECK(s.runs == 4);
    CHECK(s.failures == 0);
    CHECK(*s.median == doctest::Approx(0.5 * (v[1] + v[2])).epsilon(1e-15));
    CHECK(*s.min == v.front());
    CHECK(*s.max == v.back());
  }
  const auto tables = emit_tables(r);
  REQUIRE(tables.size() == 3);
  CHECK(tables[0].name == "table1");
  CHECK(tables[0].csv.find("0.2,") != std::string::npos);
  CHECK(tables[1].csv.find("0.9,") != std::string::npos);
  CHECK(tables[2].csv.rfind("epsilon,theta_0.9", 0) == 0);

  r.epsilons.clear();
  for (ExperimentCell& c : r.cells) c.first_hit.clear();
  summarize(r);
  CHECK(emit_tables(r).size() == 2);
}

TEST_CASE("report csv round trip") {
  ExperimentConfig cfg;
  cfg.thetas = {0.5, 1.0};
  cfg.seeds = {7, 8, 9};
  cfg.n_max = 300;
  const ExperimentReport r = run_experiment(cfg);
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("theta,seed,min_rel_err,argmin_k,N_0.5,N_0.1,N_0.05,N_0.01,N_0.005,N_0.001,status\n", 0) == 0);
  const ExperimentReport back = parse_report_csv(csv);
  REQUIRE(back.cells.size() == r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    CHECK(back.cells[i].theta == r.cells[i].theta);
    CHECK(back.cells[i].seed == r.cells[i].seed);
    CHECK(back.cells[i].min_rel_err == r.cells[i].min_rel_err);
    CHECK(back.cells[i].argmin_k == r.cells[i].argmin_k);
    CHECK(back.cells[i].first_hit == r.cells[i].first_hit);
  }
  CHECK(report_csv(back) == csv);
  CHECK(emit_tables(back)[2].csv == emit_tables(r)[2].csv);
  CHECK(kind_of([] { (void)parse_report_csv("nonsense\n1,2\n"); }) == ErrorKind::Io);
}

TEST_CASE("traces and reruns are reproducible") {
  ExperimentConfig cfg;
  cfg.thetas = {0.9};
  cfg.seeds = {1, 2};
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  const ExperimentReport ra = run_experiment(cfg, a / "traces");
  write_report(ra, cfg.seeds, a);
  const ExperimentReport rb = run_experiment(cfg, b / "traces");
  write_report(rb, cfg.seeds, b);
  CHECK(slurp_dir(a) == slurp_dir(b));

  for (const char* name : {"report.csv", "table1.csv", "table2.csv", "table3.csv", "tables.txt", "figure1.csv",
                           "meta.txt"}) {
    CHECK(fs::exists(a / name));
  }
  const fs::path trace = a / "traces" / trace_file_name(0.9, 1);
  REQUIRE(fs::exists(trace));
  std::istringstream in(read_text_file(trace));
  std::string line;
  std::size_t lines = 0;
  const ConvexSet q = benchmark_problem().set();
  std::getline(in, line);
  CHECK(line == "k,x1,x2,alpha,lambda,e_norm,rel_err");
  while (std::getline(in, line)) {
    ++lines;
    std::istringstream row(line);
    std::string k, x1, x2;
    std::getline(row, k, ',');
    std::getline(row, x1, ',');
    std::getline(row, x2, ',');
    REQUIRE(std::stoul(k) == lines);
    REQUIRE(contains(q, Vector{std::stod(x1), std::stod(x2)}, 0.0));
  }
  CHECK(lines == 6000);
  const std::string meta = read_text_file(a / "meta.txt");
  CHECK(meta.find("prng=splitmix64") != std::string::npos);
  CHECK(meta.find("seeds=1,2") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failing cells are recorded") {
  const Problem p(ConvexSet::halfspace(Vector{-1.0, -1.0}, 10.0), Mapping::identity(2),
                  Mapping::affine(Matrix::identity(2), Vector{0.0, 0.0}, MapRole::InverseStronglyMonotone, 1.0),
                  Mapping::constant(Vector{1.0, -1.0}), ConvexSet::ball(Vector{1.0, -1.0}, 0.1));
  ExperimentConfig cfg;
  cfg.problem = p;
  cfg.z1 = Vector{1.0, -1.0};
  cfg.lambda = 1000.0;
  cfg.thetas = {1.0};
  cfg.seeds = {1, 2};
  const ExperimentReport r = run_experiment(cfg);
  REQUIRE(r.cells.size() == 2);
  for (const ExperimentCell& c : r.cells) {
    REQUIRE(c.failure.has_value());
    CHECK(c.failure->find("diverge") != std::string::npos);
  }
  CHECK(r.summary.front().failures == 2);
  CHECK_FALSE(r.summary.front().median.has_value());
  CHECK(report_csv(r).find("failed") != std::string::npos);
}

TEST_CASE("validation and I/O errors") {
  ExperimentConfig cfg;
  cfg.thetas = {};
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Parameter);
  cfg.thetas = {1.5};
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Parameter);
  cfg.thetas = {0.9};
  cfg.seeds = {};
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Parameter);
  cfg.deterministic = true;
  CHECK_NOTHROW(cfg.validate());
  cfg.problem = Problem(ConvexSet::orthant(2), Mapping::identity(2),
                        Mapping::least_squares_gradient(Matrix{{1.0, 1.0}, {2.0, 2.0}}, Vector{3.0, 5.0}),
                        Mapping::trig_contraction());
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Configuration);

  ExperimentConfig small;
  small.deterministic = true;
  small.thetas = {0.9};
  small.n_max = 10;
  const ExperimentReport r = run_experiment(small);
  try {
    write_report(r, {}, "/proc/visc_no_such_dir/out");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find("/proc/visc_no_such_dir") != std::string::npos);
  }
}
