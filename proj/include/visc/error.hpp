#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "visc/space.hpp"

namespace visc {

enum class ErrorKind {
  Dimension,
  NonFinite,
  InvalidDescriptor,
  Parameter,
  ScheduleViolation,
  Index,
  Registry,
  Configuration,
  Divergence,
  NonConvergence,
  Io,
};

[[nodiscard]] constexpr const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::InvalidDescriptor: return "invalid-descriptor";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::ScheduleViolation: return "schedule-violation";
    case ErrorKind::Index: return "index";
    case ErrorKind::Registry: return "registry";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Base of every error raised by the library. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// An iterate became non-finite. Carries the last finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t k, Vector last_finite, const std::string& what)
      : Error(ErrorKind::Divergence, what), k_(k), last_finite_(std::move(last_finite)) {}

  /// Index of the last finite iterate.
  [[nodiscard]] std::size_t iteration() const noexcept { return k_; }
  [[nodiscard]] const Vector& last_finite() const noexcept { return last_finite_; }

 private:
  std::size_t k_;
  Vector last_finite_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::size_t iterations, double residual, const std::string& what)
      : Error(ErrorKind::NonConvergence, what), iterations_(iterations), residual_(residual) {}

  [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

}  // namespace visc
