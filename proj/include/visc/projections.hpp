#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "visc/space.hpp"

namespace visc {

/// Default membership tolerance for contains().
inline constexpr double kMembershipTol = 1e-10;

struct NonnegOrthant {};

struct Box {
  Vector lo;
  Vector hi;
};

struct Ball {
  Vector center;
  double radius;
};

/// {x : ⟨normal, x⟩ ≤ offset}
struct Halfspace {
  Vector normal;
  double offset;
};

/// {x : ⟨normal, x⟩ = offset}
struct Hyperplane {
  Vector normal;
  double offset;
};

/// {x ≥ 0 : Σ x_i = a}, a > 0.
struct Simplex {
  double a;
};

/// Closed convex subset of R^dim with an exact projection rule.
///
/// Instances are only obtainable through the factories, which enforce the
/// descriptor invariants (lo ≤ hi, positive radius, nonzero normals, a > 0).
class ConvexSet {
 public:
  using Shape = std::variant<NonnegOrthant, Box, Ball, Halfspace, Hyperplane, Simplex>;

  static ConvexSet orthant(std::size_t dim);
  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet hyperplane(Vector normal, double offset);
  static ConvexSet simplex(std::size_t dim, double a);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }

  /// Short human-readable description, e.g. "simplex(a=2.6, dim=2)".
  [[nodiscard]] std::string describe() const;

 private:
  ConvexSet(std::size_t dim, Shape shape) : dim_(dim), shape_(std::move(shape)) {}

  std::size_t dim_;
  Shape shape_;
};

/// Nearest point of `set` to x.
[[nodiscard]] Vector project(const ConvexSet& set, const Vector& x);

/// The unique α with Σ_k max(x_k − α, 0) = a (a > 0), found by sorting
/// the coordinates in descending order and scanning for the breakpoint.
/// project(simplex(n, a), x) is exactly (max(x_k − α, 0))_k.
[[nodiscard]] double simplex_threshold(const Vector& x, double a);

/// True iff x violates each defining constraint of `set` by at most tol.
/// Halfspace and hyperplane violations are measured as Euclidean distance.
[[nodiscard]] bool contains(const ConvexSet& set, const Vector& x, double tol = kMembershipTol);

}  // namespace visc
