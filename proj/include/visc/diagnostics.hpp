#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace visc {

struct Warning {
  std::string message;
  std::size_t count = 0;
};

/// Collects recoverable hypothesis violations (e.g. λ outside [0, 2ν]).
///
/// Identical messages are folded into one entry with a repeat count so a
/// long run with a constant out-of-range step size yields a single line.
/// With `strict` set, a violation throws a ScheduleViolation error instead.
class Diagnostics {
 public:
  Diagnostics() = default;
  explicit Diagnostics(bool strict) : strict_(strict) {}

  void schedule_violation(const std::string& message);

  [[nodiscard]] bool strict() const noexcept { return strict_; }
  [[nodiscard]] const std::vector<Warning>& warnings() const noexcept { return warnings_; }
  [[nodiscard]] bool empty() const noexcept { return warnings_.empty(); }

 private:
  bool strict_ = false;
  std::vector<Warning> warnings_;
};

}  // namespace visc
