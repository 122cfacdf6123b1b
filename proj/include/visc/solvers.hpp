#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "visc/diagnostics.hpp"
#include "visc/operators.hpp"
#include "visc/schedules.hpp"
#include "visc/space.hpp"

namespace visc {

/// x_{k+1} = α_k f(x_k) + (1 − α_k) S P_Q(x_k − λ_k A x_k)
struct ExplicitViscosity {};

/// x_{k+1} = P_Q(α_k f(x_k) + (1 − α_k) S P_Q(x_k − λ_k A x_k) + e_k)
struct Perturbed {};

/// x_{k+1} = α_k x_k + (1 − α_k) S P_Q(x_k − λ_k A x_k)
struct TakahashiToyoda {};

/// x_{k+1} = α_k u + (1 − α_k) S P_Q(x_k − λ_k A x_k)
struct Halpern {
  Vector anchor;
};

/// x_{k+1} = β_k x_k + (1 − β_k) P_Q(α_k u + (1 − α_k) S P_Q(x_k − λ_k A x_k))
struct YaoOuter {
  Vector anchor;
  BetaRule beta = ConstantValue{0.5};
};

/// x_{k+1} = β_k x_k + (1 − β_k) S P_Q(α_k u + (1 − α_k)(x_k − λ_k A x_k))
struct YaoInner {
  Vector anchor;
  BetaRule beta = ConstantValue{0.5};
};

using Algorithm =
    std::variant<ExplicitViscosity, Perturbed, TakahashiToyoda, Halpern, YaoOuter, YaoInner>;

[[nodiscard]] std::string algorithm_name(const Algorithm& a);

struct StopRule {
  double rel_err_target;
  Vector reference;
};

struct SolverConfig {
  Algorithm algorithm;
  Problem problem;
  ScheduleSpec schedule;
  PerturbationSpec perturbation = NoPerturbation{};
  Vector x1;
  std::size_t n_max = 6000;
  /// Reference point for rel_err = ‖x_k − ref‖/‖ref‖ (recorded, no early stop).
  std::optional<Vector> reference;
  std::optional<StopRule> stop;
  /// Hard-fail on λ_k ∉ [0, 2ν] instead of recording a warning.
  bool strict_schedule = false;

  /// Checks x1 ∈ Q, dimensions, anchors and β ranges. Throws Parameter/Dimension errors.
  void validate() const;
  /// Canonical one-line description used for the config digest.
  [[nodiscard]] std::string describe() const;
};

struct TraceRow {
  std::size_t k;
  Vector x;
  double alpha;
  double lambda;
  double e_norm;
  std::optional<double> rel_err;
};

struct TraceMetadata {
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::string prng = kPrngName;
  std::string config_digest;
  std::string config;
  std::vector<Warning> warnings;
  std::size_t iterations = 0;  // number of iterates x_1..x_K visited
  bool stopped_early = false;
};

/// Every visited iterate x_1..x_K (or every stride-th one) with the
/// parameters α_k, λ_k, ‖e_k‖ applied at step k.
struct RunTrace {
  std::vector<TraceRow> rows;
  TraceMetadata metadata;
  Vector final_x;
  std::optional<double> min_rel_err;
  std::optional<std::size_t> argmin_k;
};

struct RunOptions {
  /// Record every stride-th row (always including k = 1 and the last row).
  std::size_t stride = 1;
  /// Invoked on every iterate regardless of stride.
  std::function<void(const TraceRow&)> observer;
};

/// One explicit viscosity step from x_k.
[[nodiscard]] Vector explicit_step(const Vector& x, std::size_t k, const SolverConfig& cfg,
                                   Diagnostics* diag = nullptr);

/// One step of the perturbed process: P_Q(explicit_step(x, k) + e_k).
[[nodiscard]] Vector perturbed_step(const Vector& x, std::size_t k, const SolverConfig& cfg,
                                    Diagnostics* diag = nullptr);

/// One step of whichever algorithm `cfg` selects.
[[nodiscard]] Vector algorithm_step(const Vector& x, std::size_t k, const SolverConfig& cfg,
                                    Diagnostics* diag = nullptr);

/// Iterates from x1 and records x_1..x_{n_max} (fewer on an early stop).
/// Throws DivergenceError when an iterate stops being finite.
[[nodiscard]] RunTrace run(const SolverConfig& cfg, const RunOptions& options = {});

// --- implicit path ----------------------------------------------------------

struct ImplicitConfig {
  std::vector<double> t_values;
  /// t ↦ λ(t); must land in [a, b] ⊂ (0, 2ν).
  std::function<double(double)> lambda_of_t;
  double a;
  double b;
  double inner_tol = 1e-10;
  std::size_t inner_max_iter = 50'000'000;
  /// Cold-start point.
  Vector x1;

  void validate(const Problem& problem) const;
};

struct ImplicitSolution {
  double t;
  double lambda;
  Vector x;
  double residual;  // ‖x − T_{t,λ(t)} x‖
  std::size_t iterations;
  std::optional<double> distance_to_reference;
};

/// Fixed point of T_{t,λ(t)} by Banach iteration from `start`. Stops once the
/// a-posteriori bound ‖x_{j+1} − x_j‖·(1 − σt)/(σt) falls to inner_tol.
[[nodiscard]] ImplicitSolution implicit_solve(double t, const ImplicitConfig& cfg,
                                              const Problem& problem, const Vector& start);
[[nodiscard]] ImplicitSolution implicit_solve(double t, const ImplicitConfig& cfg,
                                              const Problem& problem);

/// Solves along cfg.t_values, warm-starting each solve from the previous one.
/// When `reference` is given each entry carries ‖x_t − reference‖.
[[nodiscard]] std::vector<ImplicitSolution> implicit_path(
    const ImplicitConfig& cfg, const Problem& problem,
    const std::optional<Vector>& reference = std::nullopt);

// --- reference solution and recursion oracle -------------------------------

/// q* as the fixed point of P_Ω ∘ f, iterated from P_Ω(0) until the step is at
/// most tol·(1 − ρ)/ρ, which guarantees ‖x − q*‖ ≤ tol.
[[nodiscard]] Vector reference_qstar(const Problem& problem, double tol = 1e-12);

using Sequence = std::function<double(std::size_t)>;

/// a_1 = a1, a_{n+1} = (1 − γ_n) a_n + γ_n r_n + δ_n for n = 1..N−1; returns a_1..a_N.
[[nodiscard]] std::vector<double> xu_recursion(double a1, const Sequence& gamma, const Sequence& r,
                                               const Sequence& delta, std::size_t N);

}  // namespace visc
