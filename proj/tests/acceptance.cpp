#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "visc/experiment.hpp"
#include "visc/projections.hpp"
#include "visc/properties.hpp"
#include "visc/solvers.hpp"

using namespace visc;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const ThetaSummary* summary_for(const ExperimentReport& r, double theta) {
  for (const ThetaSummary& s : r.summary) {
    if (s.theta == theta) return &s;
  }
  return nullptr;
}

SolverConfig benchmark_solver(Algorithm a, PerturbationSpec noise, double theta) {
  return SolverConfig{.algorithm = std::move(a),
                      .problem = benchmark_problem(),
                      .schedule = ScheduleSpec::power(theta, kBenchmarkLambda),
                      .perturbation = noise,
                      .x1 = benchmark_start(),
                      .n_max = 6000,
                      .reference = std::nullopt,
                      .stop = std::nullopt};
}

void reference_point() {
  const Problem p = benchmark_problem();
  const auto t0 = std::chrono::steady_clock::now();
  const Vector q = reference_qstar(p);
  const double elapsed = seconds_since(t0);
  const double residual = distance(q, project(*p.omega(), p.f()(q)));
  const bool rounded = std::round(q[0] * 1e4) == 9647.0 && std::round(q[1] * 1e4) == 16353.0;
  report(1, "reference point", rounded && residual <= 1e-10 && elapsed < 0.01,
         fmt("q*=(%.6f, %.6f) residual=%.3g time=%.3gms", q[0], q[1], residual, elapsed * 1e3));
}

void tables(const ExperimentReport& seeded, double sweep_seconds) {
  const std::map<double, double> table1{{0.1, 0.4774}, {0.2, 0.1810}, {0.3, 0.0742}, {0.4, 0.0309}};
  bool ok1 = sweep_seconds < 10.0;
  std::string d1;
  for (const auto& [theta, target] : table1) {
    const ThetaSummary* s = summary_for(seeded, theta);
    const bool in = s && s->median && s->runs >= 20 && std::abs(*s->median - target) <= 0.25 * target;
    ok1 = ok1 && in;
    d1 += fmt("theta=%.1f median=%.4f target=%.4f; ", theta, s && s->median ? *s->median : NAN, target);
  }

  ExperimentConfig det;
  det.deterministic = true;
  const ExperimentReport baseline = run_experiment(det);
  const std::map<double, double> frozen{{0.1, 0.47736758055914197}, {0.2, 0.18094545339484788},
                                        {0.3, 0.07420862189125306}, {0.4, 0.03092726898129284}};
  for (const ExperimentCell& c : baseline.cells) {
    const auto it = frozen.find(c.theta);
    if (it != frozen.end() && std::abs(c.min_rel_err - it->second) > 1e-12 * it->second) {
      ok1 = false;
      d1 += fmt("baseline drift at theta=%.1f; ", c.theta);
    }
  }
  report(2, "table 1 band", ok1, d1 + fmt("sweep=%.2fs", sweep_seconds));

  const std::map<double, double> table2{{0.6, 0.0055}, {0.8, 0.0010}, {0.9, 0.0005}, {1.0, 0.0008}};
  bool ok2 = true;
  std::string d2;
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (const auto& [theta, target] : table2) {
    const ThetaSummary* s = summary_for(seeded, theta);
    const double m = s && s->median ? *s->median : NAN;
    ok2 = ok2 && m >= target / 2 && m <= target * 2;
    if (m < best) {
      best = m;
      best_theta = theta;
    }
    d2 += fmt("theta=%.1f median=%.5f target=%.4f; ", theta, m, target);
  }
  ok2 = ok2 && best_theta == 0.9;
  report(3, "table 2 band", ok2, d2 + fmt("best theta=%.1f", best_theta));

  constexpr std::size_t nd = 0;
  const std::vector<double> eps{0.5, 0.10, 0.05, 0.01, 0.005, 0.001};
  const std::vector<double> thetas{0.6, 0.8, 0.9, 1.0};
  const std::vector<std::vector<std::size_t>> target{{6, 5, 4, 4},         {53, 23, 14, 17},     {158, 56, 36, 42},
                                                    {2200, 372, 249, 314}, {nd, 854, 533, 716}, {nd, nd, 2989, 4742}};
  bool ok4 = true;
  std::string d4;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::size_t largest_defined = 0;
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      if (target[i][j] != nd) largest_defined = std::max(largest_defined, target[i][j]);
    }
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      const std::optional<std::size_t> ours = summary_for(seeded, thetas[j])->first_hit_median[i];
      if (target[i][j] == nd) {
        const bool ok = !ours || *ours > largest_defined;
        ok4 = ok4 && ok;
        if (!ok) d4 += fmt("N(%g,%.1f) defined below row; ", eps[i], thetas[j]);
      } else if (i < 3) {
        const double band = std::max(0.5 * double(target[i][j]), 5.0);
        const bool ok = ours && std::abs(double(*ours) - double(target[i][j])) <= band;
        ok4 = ok4 && ok;
        d4 += fmt("N(%g,%.1f)=%s/%zu; ", eps[i], thetas[j], ours ? std::to_string(*ours).c_str() : "ND",
                  target[i][j]);
      }
    }
  }
  report(4, "table 3 structure", ok4, d4);
}

void property_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const PropertyReport r = run_property_suite(benchmark_problem(), PropertyOptions{});
  std::string detail = fmt("%zu checks in %.0fms", r.results.size(), seconds_since(t0) * 1e3);
  for (const PropertyResult& p : r.results) {
    if (!p.passed) detail += "; failed " + p.name + fmt(" worst=%.3g", p.worst);
  }
  report(5, "property suite", r.all_passed(), detail);
}

void implicit_path_check() {
  const Problem p = benchmark_problem();
  const Vector q = reference_qstar(p);
  const ImplicitConfig cfg{.t_values = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5},
                           .lambda_of_t = [](double) { return kBenchmarkLambda; },
                           .a = kBenchmarkLambda,
                           .b = kBenchmarkLambda,
                           .inner_tol = 1e-10,
                           .inner_max_iter = 50'000'000,
                           .x1 = benchmark_start()};
  const auto path = implicit_path(cfg, p, q);
  double worst = 0.0;
  for (const ImplicitSolution& s : path) worst = std::max(worst, s.residual);
  const double final_distance = *path.back().distance_to_reference;
  report(6, "implicit path", path.size() == 6 && worst <= 1e-10 && final_distance <= 1e-3,
         fmt("final distance=%.3g worst residual=%.3g", final_distance, worst));
}

void coupling() {
  const double sigma = benchmark_problem().sigma();
  const RunTrace clean = run(benchmark_solver(ExplicitViscosity{}, NoPerturbation{}, 0.9));
  double worst_slack = -std::numeric_limits<double>::infinity();
  double worst_final = 0.0;
  std::size_t raw_exceedances = 0;
  bool ok = true;
  for (std::uint64_t seed : default_seeds()) {
    const RunTrace noisy = run(benchmark_solver(Perturbed{}, UniformSquareOverKsq{seed}, 0.9));
    for (std::size_t n = 0; n + 1 < noisy.rows.size(); ++n) {
      const TraceRow& x = noisy.rows[n];
      const double d = distance(x.x, clean.rows[n].x);
      const double next = distance(noisy.rows[n + 1].x, clean.rows[n + 1].x);
      const double bound = (1.0 - sigma * x.alpha) * d + x.e_norm;
      // Rounding of the computed iterates themselves.
      const double ulp_allowance =
          4.0 * std::numeric_limits<double>::epsilon() * std::max(norm(noisy.rows[n + 1].x), norm(clean.rows[n + 1].x));
      worst_slack = std::max(worst_slack, next - bound);
      if (next > bound) ++raw_exceedances;
      if (next > bound + ulp_allowance) ok = false;
    }
    worst_final = std::max(worst_final, distance(noisy.final_x, clean.final_x));
  }
  ok = ok && worst_final <= 1e-3;
  report(7, "coupling", ok, fmt("max(d_next - bound)=%.3g steps above exact bound=%zu max d_6000=%.3g", worst_slack, raw_exceedances,
             worst_final));
}

void reductions() {
  const Vector u{1.0, 1.0};
  const Problem base = benchmark_problem();
  const Problem constant(base.set(), base.S(), base.A(), Mapping::constant(u), base.omega());
  SolverConfig e = benchmark_solver(ExplicitViscosity{}, NoPerturbation{}, 0.9);
  e.problem = constant;
  SolverConfig h = e;
  h.algorithm = Halpern{u};
  const RunTrace te = run(e);
  const RunTrace th = run(h);
  bool halpern = te.rows.size() == 6000 && th.rows.size() == 6000;
  for (std::size_t i = 0; halpern && i < te.rows.size(); ++i) halpern = te.rows[i].x == th.rows[i].x;

  const SolverConfig p = benchmark_solver(Perturbed{}, NoPerturbation{}, 0.9);
  bool perturbed = true;
  Vector x = benchmark_start();
  for (std::size_t k = 1; k <= 6000 && perturbed; ++k) {
    const Vector next = perturbed_step(x, k, p);
    perturbed = next == project(base.set(), explicit_step(x, k, p));
    x = next;
  }
  report(8, "reduction identities", halpern && perturbed,
         fmt("halpern=%s perturbed=%s", halpern ? "exact" : "differs", perturbed ? "exact" : "differs"));
}

void xu_oracle() {
  const auto zero = [](std::size_t) { return 0.0; };
  const auto harmonic = xu_recursion(1.0, [](std::size_t n) { return 1.0 / double(n + 1); }, zero, zero, 100000);
  double worst = 0.0;
  for (std::size_t n = 1; n <= harmonic.size(); ++n) worst = std::max(worst, std::abs(double(n) * harmonic[n - 1] - 1.0));
  const auto decaying = xu_recursion(
      1.0, [](std::size_t n) { return std::pow(double(n), -0.9); }, [](std::size_t n) { return std::pow(double(n), -0.5); },
      [](std::size_t n) { return 1.0 / (double(n) * double(n)); }, 100000);
  report(9, "xu oracle", worst <= 1e-12 && decaying.back() < 1e-2,
         fmt("max|n*a_n - 1|=%.3g a_N=%.3g", worst, decaying.back()));
}

}  // namespace

int main() {
  reference_point();
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport seeded = run_experiment(ExperimentConfig{});
  tables(seeded, seconds_since(t0));
  property_suite();
  implicit_path_check();
  coupling();
  reductions();
  xu_oracle();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
