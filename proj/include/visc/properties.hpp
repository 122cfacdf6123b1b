#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "visc/operators.hpp"

namespace visc {

/// One inequality checked on sampled points. `worst` is the largest observed
/// violation (lhs − rhs); the check passes when worst ≤ tolerance.
struct PropertyResult {
  std::string name;
  std::size_t samples = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct PropertyReport {
  std::vector<PropertyResult> results;
  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] std::string text() const;
};

struct PropertyOptions {
  std::size_t pairs = 1000;
  std::uint64_t seed = 0x5eed;
  double sample_radius = 10.0;
  std::vector<double> lambdas{0.05, 0.1, 0.19};
  std::vector<double> t_values{1.0, 0.5, 0.1, 0.01};
};

/// Projection, operator and contraction inequalities for `problem` on
/// deterministic random samples:
///   projection idempotence, variational characterization and firm
///   nonexpansiveness (Q and, when known, Omega); descent inequality and
///   Theta nonexpansiveness per λ ≤ 2ν; T_{t,λ} contraction ≤ 1 − σt;
///   ISM inequality; contraction factor of f; gradient vs central differences
///   (least-squares A only).
[[nodiscard]] PropertyReport run_property_suite(const Problem& problem,
                                                const PropertyOptions& options = {});

}  // namespace visc
