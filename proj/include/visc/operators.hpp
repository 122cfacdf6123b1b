#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "visc/diagnostics.hpp"
#include "visc/projections.hpp"
#include "visc/space.hpp"

namespace visc {

/// What a mapping is certified to be, which fixes the meaning of its modulus:
///   Contraction              ‖f x − f y‖ ≤ ρ‖x − y‖,  ρ ∈ [0, 1)
///   Nonexpansive             ‖S x − S y‖ ≤ L‖x − y‖,  L ≤ 1
///   InverseStronglyMonotone  ⟨A x − A y, x − y⟩ ≥ ν‖A x − A y‖²,  ν > 0
enum class MapRole { Contraction, Nonexpansive, InverseStronglyMonotone };

[[nodiscard]] const char* to_string(MapRole role) noexcept;

struct IdentityMap {};

/// f(x) = ½(5 + cos(x₁+x₂), 6 − sin(x₁+x₂)) on R², Lipschitz constant √2/2.
struct TrigContraction {};

/// f ≡ u.
struct ConstantAnchor {
  Vector u;
};

/// ∇φ for φ(x) = ½‖Bx − b‖², i.e. x ↦ Bᵀ(Bx − b).
struct LeastSquaresGradient {
  Matrix B;
  Vector b;
};

/// x ↦ Mx + c
struct AffineMap {
  Matrix M;
  Vector c;
};

using MapFunction = std::function<Vector(const Vector&)>;

struct CustomMap {
  std::string name;
  std::shared_ptr<const MapFunction> fn;
};

/// A concrete mapping together with its certified role and modulus.
///
/// Built-in kinds carry exact moduli (ν = 1/L for least-squares gradients,
/// ρ = √2/2 for the trigonometric contraction, ρ = 0 for constants). Affine
/// and custom kinds declare theirs, and the declaration is spot-checked on
/// random pairs before the mapping can be constructed.
class Mapping {
 public:
  using Kind = std::variant<IdentityMap, TrigContraction, ConstantAnchor, LeastSquaresGradient,
                            AffineMap, CustomMap>;

  /// Identity on R^dim. Valid roles: Nonexpansive (L = 1) or ISM (ν = 1).
  static Mapping identity(std::size_t dim, MapRole role = MapRole::Nonexpansive);
  static Mapping trig_contraction();
  static Mapping constant(Vector u);
  static Mapping least_squares_gradient(Matrix B, Vector b);
  static Mapping affine(Matrix M, Vector c, MapRole role, double modulus);

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] MapRole role() const noexcept { return role_; }
  [[nodiscard]] double modulus() const noexcept { return modulus_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] Vector apply(const Vector& x) const;
  [[nodiscard]] Vector operator()(const Vector& x) const { return apply(x); }

 private:
  friend class MappingRegistry;
  Mapping(Kind kind, MapRole role, double modulus, std::size_t dim);

  Kind kind_;
  MapRole role_;
  double modulus_;
  std::size_t dim_;
};

[[nodiscard]] Vector apply(const Mapping& map, const Vector& x);

/// Named user mappings. Registration verifies the declared modulus on random
/// pairs and refuses the entry on violation.
class MappingRegistry {
 public:
  /// Samples are drawn uniformly from [-sample_radius, sample_radius]^dim and,
  /// when `domain` is given, projected onto it first.
  void add(const std::string& name, std::size_t dim, MapRole role, double modulus, MapFunction fn,
           const std::optional<ConvexSet>& domain = std::nullopt, double sample_radius = 10.0);

  [[nodiscard]] bool contains(const std::string& name) const;
  /// Throws a Registry error for unknown names.
  [[nodiscard]] Mapping resolve(const std::string& name) const;

 private:
  struct Entry {
    std::size_t dim;
    MapRole role;
    double modulus;
    std::shared_ptr<const MapFunction> fn;
  };
  std::map<std::string, Entry> entries_;
};

/// Number of random pairs used to certify a declared modulus.
inline constexpr std::size_t kModulusSpotCheckPairs = 1000;

/// Largest amount by which `fn` violates the declared role/modulus over
/// `pairs` random pairs (≤ 0 means no violation observed).
[[nodiscard]] double modulus_violation(const MapFunction& fn, std::size_t dim, MapRole role,
                                       double modulus, const std::optional<ConvexSet>& domain,
                                       double sample_radius, std::size_t pairs,
                                       std::uint64_t seed = 0x5eed);

/// φ(x) = ½‖Bx − b‖²
[[nodiscard]] double least_squares_value(const Matrix& B, const Vector& b, const Vector& x);

/// Largest eigenvalue of BᵀB, i.e. the Lipschitz constant of x ↦ Bᵀ(Bx − b).
/// Closed-form eigenvalues when BᵀB is at most 3×3; power iteration above.
[[nodiscard]] double ls_lipschitz(const Matrix& B);

/// The data (Q, S, A, f) plus the optional closed-form solution set Ω.
class Problem {
 public:
  /// Validates roles and dimensions, and spot-checks that f and S map Q into Q.
  Problem(ConvexSet Q, Mapping S, Mapping A, Mapping f,
          std::optional<ConvexSet> omega = std::nullopt);

  [[nodiscard]] const ConvexSet& set() const noexcept { return Q_; }
  [[nodiscard]] const Mapping& S() const noexcept { return S_; }
  [[nodiscard]] const Mapping& A() const noexcept { return A_; }
  [[nodiscard]] const Mapping& f() const noexcept { return f_; }
  [[nodiscard]] const std::optional<ConvexSet>& omega() const noexcept { return omega_; }

  [[nodiscard]] std::size_t dim() const noexcept { return Q_.dim(); }
  [[nodiscard]] double nu() const noexcept { return A_.modulus(); }
  [[nodiscard]] double rho() const noexcept { return f_.modulus(); }
  /// σ = 1 − ρ
  [[nodiscard]] double sigma() const noexcept { return 1.0 - f_.modulus(); }

  [[nodiscard]] std::string describe() const;

 private:
  ConvexSet Q_;
  Mapping S_;
  Mapping A_;
  Mapping f_;
  std::optional<ConvexSet> omega_;
};

/// x − λ A x. λ outside [0, 2ν] is reported to `diag` (see Diagnostics).
[[nodiscard]] Vector forward_step(const Vector& x, const Mapping& A, double lambda,
                                  Diagnostics* diag = nullptr);

/// Θ_λ(x) = P_Q(x − λ A x). Its fixed points are exactly the solutions of VI(A, Q).
[[nodiscard]] Vector theta_map(const Vector& x, const Problem& problem, double lambda,
                               Diagnostics* diag = nullptr);

/// T_{t,μ}(x) = t f(x) + (1 − t) S Θ_μ(x), a contraction with factor 1 − σt.
/// Throws a Parameter error for t ∉ (0, 1].
[[nodiscard]] Vector viscosity_map(const Vector& x, const Problem& problem, double t, double mu,
                                   Diagnostics* diag = nullptr);

}  // namespace visc
