#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "visc/space.hpp"

namespace visc {

/// α_k = k^{−θ}. θ ∈ (0, 1] satisfies the divergent-sum hypothesis; larger
/// θ is accepted so that violating schedules can be studied.
struct PowerAlpha {
  double theta;
};

/// Explicit values, entry i is the parameter at k = i + 1.
struct TableValues {
  std::vector<double> values;
};

struct ConstantValue {
  double value;
};

using AlphaRule = std::variant<PowerAlpha, TableValues>;
using LambdaRule = std::variant<ConstantValue, TableValues>;

/// Target interval [a, b] for the step sizes λ_k.
struct StepBounds {
  double a;
  double b;
};

/// The sequences {α_k} and {λ_k}.
class ScheduleSpec {
 public:
  /// Without explicit bounds, a constant λ gets [λ, λ] and a table gets
  /// [min, max] of its entries.
  ScheduleSpec(AlphaRule alpha, LambdaRule lambda, std::optional<StepBounds> bounds = std::nullopt);

  static ScheduleSpec power(double theta, double lambda);

  [[nodiscard]] const AlphaRule& alpha() const noexcept { return alpha_; }
  [[nodiscard]] const LambdaRule& lambda() const noexcept { return lambda_; }
  [[nodiscard]] const StepBounds& bounds() const noexcept { return bounds_; }

  /// Number of defined indices, or nullopt for closed-form rules.
  [[nodiscard]] std::optional<std::size_t> length() const;

  [[nodiscard]] std::string describe() const;

 private:
  AlphaRule alpha_;
  LambdaRule lambda_;
  StepBounds bounds_;
};

/// α_k for k ≥ 1. Index error past the end of a table.
[[nodiscard]] double alpha_at(const ScheduleSpec& s, std::size_t k);

/// λ_k for k ≥ 1. Index error past the end of a table.
[[nodiscard]] double lambda_at(const ScheduleSpec& s, std::size_t k);

/// True when λ lies outside the schedule's [a, b].
[[nodiscard]] bool lambda_out_of_bounds(const ScheduleSpec& s, double lambda);

/// {β_k} for the averaged (Yao-type) schemes; every β_k ∈ [0, 1).
using BetaRule = std::variant<ConstantValue, TableValues>;

[[nodiscard]] BetaRule validated_beta(BetaRule rule);
[[nodiscard]] double beta_at(const BetaRule& rule, std::size_t k);

// --- perturbations --------------------------------------------------------

/// Name recorded in every artifact that depends on random draws.
inline constexpr const char* kPrngName = "splitmix64";

struct NoPerturbation {};

/// e_k = X_k / k², X_k uniform on [−1, 1]^dim, independent across k.
struct UniformSquareOverKsq {
  std::uint64_t seed;
};

using PerturbationSpec = std::variant<NoPerturbation, UniformSquareOverKsq>;

/// n-th output (n ≥ 1) of the SplitMix64 stream started at `seed`.
/// Random access: the stream state after n steps is seed + n·γ.
[[nodiscard]] std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t n) noexcept;

/// Uniform double in [0, 1) from the top 53 bits.
[[nodiscard]] double unit_interval(std::uint64_t bits) noexcept;

/// e_k. Coordinate j of X_k is draw (k−1)·dim + j + 1 of the stream, mapped
/// to [−1, 1) by 2u − 1, so the result depends only on (seed, k, dim).
[[nodiscard]] Vector perturbation_at(const PerturbationSpec& p, std::size_t k, std::size_t dim);

[[nodiscard]] std::optional<std::uint64_t> perturbation_seed(const PerturbationSpec& p);
[[nodiscard]] std::string describe(const PerturbationSpec& p);

// --- hypothesis diagnostics ----------------------------------------------

enum class Verdict { AnalyticallySatisfied, NumericallyConsistent, Violated };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct HypothesisCheck {
  std::string id;           // "i" .. "v"
  std::string statement;
  Verdict verdict;
  std::string evidence;
};

struct HypothesisEvidence {
  std::size_t horizon = 0;
  double alpha_partial_sum = 0.0;    // Σ_{k≤N} α_k
  double alpha_tail_ratio = 0.0;     // |α_N − α_{N−1}| / α_{N−1}
  double alpha_abs_variation = 0.0;  // Σ_{k<N} |α_{k+1} − α_k|
  double lambda_abs_variation = 0.0; // Σ_{k<N} |λ_{k+1} − λ_k|
  double lambda_liminf = 0.0;        // min over the second half of the horizon
  double lambda_limsup = 0.0;        // max over the second half of the horizon
  double perturbation_sum = 0.0;     // Σ_{k≤N} ‖e_k‖
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  HypothesisEvidence evidence;

  [[nodiscard]] bool all_satisfied() const;
};

/// Verdicts for the five step-size hypotheses of the perturbed scheme:
///   (i)   α_k → 0 and Σ α_k = ∞
///   (ii)  0 < lim inf λ_k ≤ lim sup λ_k < 2ν
///   (iii) (α_{k+1} − α_k)/α_k → 0 or Σ |α_{k+1} − α_k| < ∞
///   (iv)  (λ_{k+1} − λ_k)/α_k → 0 or Σ |λ_{k+1} − λ_k| < ∞
///   (v)   ‖e_k‖/α_k → 0 or Σ ‖e_k‖ < ∞
/// Power/constant rules and the built-in perturbations get analytic verdicts;
/// tables get numeric verdicts over the first N entries.
[[nodiscard]] HypothesisReport hypothesis_report(const ScheduleSpec& s, const PerturbationSpec& p,
                                                 std::size_t N, double nu, std::size_t dim = 2);

}  // namespace visc
