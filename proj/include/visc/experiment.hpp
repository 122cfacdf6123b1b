#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "visc/operators.hpp"
#include "visc/space.hpp"

namespace visc {

/// The two-dimensional benchmark instance:
///   Q = {x ∈ R² : x ≥ 0},  S = I,  f(x) = ½(5 + cos(x₁+x₂), 6 − sin(x₁+x₂)),
///   A = ∇φ with φ(x) = ½‖Bx − b‖², B = [[1,1],[2,2]], b = (3,5)  (L = 10, ν = 0.1),
///   Ω = {x ≥ 0 : x₁ + x₂ = 2.6}.
[[nodiscard]] Problem benchmark_problem();

inline constexpr double kBenchmarkLambda = 0.1;
[[nodiscard]] Vector benchmark_start();

[[nodiscard]] std::vector<double> default_thetas();
[[nodiscard]] std::vector<std::uint64_t> default_seeds();
[[nodiscard]] std::vector<double> default_epsilons();

struct ExperimentConfig {
  std::vector<double> thetas = default_thetas();
  std::vector<std::uint64_t> seeds = default_seeds();
  std::size_t n_max = 6000;
  std::vector<double> epsilons = default_epsilons();
  Problem problem = benchmark_problem();
  Vector z1 = benchmark_start();
  double lambda = kBenchmarkLambda;
  /// e ≡ 0; one run per θ instead of one per seed.
  bool deterministic = false;
  double qstar_tol = 1e-12;
  /// θ below this goes to the small-θ table, the rest to the near-one table.
  double table_split = 0.5;

  void validate() const;
  [[nodiscard]] std::string describe() const;
};

/// One (θ, seed) run.
struct ExperimentCell {
  double theta;
  std::optional<std::uint64_t> seed;  // empty in deterministic mode
  double min_rel_err = 0.0;
  std::size_t argmin_k = 0;
  /// N(ε, θ) per configured ε: first k with rel_err_k ≤ ε, or empty for ND.
  std::vector<std::optional<std::size_t>> first_hit;
  /// rel_err_k for k = 1..n_max (kept in memory for the convergence series).
  std::vector<double> rel_err;
  std::optional<std::filesystem::path> trace_path;
  std::optional<std::string> failure;
};

struct ThetaSummary {
  double theta;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::optional<double> median;
  std::optional<double> min;
  std::optional<double> max;
  /// Lower median over seeds with ND ordered above every integer.
  std::vector<std::optional<std::size_t>> first_hit_median;
};

struct ExperimentReport {
  std::vector<double> thetas;
  std::vector<double> epsilons;
  std::size_t n_max = 0;
  bool deterministic = false;
  double table_split = 0.5;
  std::optional<Vector> qstar;
  std::string config_digest;
  std::string config;
  std::vector<ExperimentCell> cells;
  std::vector<ThetaSummary> summary;
};

/// N(ε) for a rel_err series indexed from k = 1.
[[nodiscard]] std::optional<std::size_t> first_hit(const std::vector<double>& rel_err, double eps);

/// Recomputes report.summary from report.cells.
void summarize(ExperimentReport& report);

/// Runs the perturbed scheme from z1 for every (θ, seed) and measures
/// rel_err_k = ‖z_k − q*‖/‖q*‖ against q* from reference_qstar. A failing
/// cell is recorded and the sweep continues. With `trace_dir`, each cell's
/// trace is written to trace_dir/theta_<θ>_seed_<s>.csv.
[[nodiscard]] ExperimentReport run_experiment(
    const ExperimentConfig& cfg,
    const std::optional<std::filesystem::path>& trace_dir = std::nullopt);

struct RenderedTable {
  std::string name;  // "table1", "table2", "table3"
  std::string csv;
  std::string text;
};

/// min rel_err vs θ for θ < split, the same for θ ≥ split, and the N(ε, θ)
/// grid over the θ ≥ split columns (all θ when none are ≥ split). The grid is
/// omitted when no ε is configured.
[[nodiscard]] std::vector<RenderedTable> emit_tables(const ExperimentReport& report);

/// report.csv: one line per cell, `theta,seed,min_rel_err,argmin_k,N_<ε>...,status`.
[[nodiscard]] std::string report_csv(const ExperimentReport& report);
/// Inverse of report_csv (cells and ε only; summary is recomputed).
[[nodiscard]] ExperimentReport parse_report_csv(const std::string& text);

/// `k,theta_<θ>...` with the per-θ median rel_err_k over seeds.
[[nodiscard]] std::string convergence_series_csv(const ExperimentReport& report);

/// `key=value` metadata. The keys thetas, seeds, nmax and deterministic double as CLI overrides.
[[nodiscard]] std::string experiment_metadata_text(const ExperimentReport& report,
                                                   const std::vector<std::uint64_t>& seeds);

/// Writes report.csv, table{1,2,3}.csv, tables.txt, figure1.csv and meta.txt into `dir`.
void write_report(const ExperimentReport& report, const std::vector<std::uint64_t>& seeds,
                  const std::filesystem::path& dir);

/// File name used for a cell's trace.
[[nodiscard]] std::string trace_file_name(double theta, std::optional<std::uint64_t> seed);

}  // namespace visc
