#include "visc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "overloaded.hpp"
#include "visc/error.hpp"

namespace visc {

namespace {

using detail::overloaded;

constexpr double kSpotCheckTol = 1e-9;
constexpr double kPowerIterationTol = 1e-12;
constexpr std::size_t kPowerIterationMax = 10000;

void require_dim(const Mapping& map, const Vector& x) {
  if (x.dim() != map.dim()) {
    throw Error(ErrorKind::Dimension, map.describe() + " expects dim " +
                                          std::to_string(map.dim()) + ", got " +
                                          std::to_string(x.dim()));
  }
}

void validate_modulus(MapRole role, double modulus) {
  if (!std::isfinite(modulus)) throw Error(ErrorKind::Parameter, "modulus must be finite");
  switch (role) {
    case MapRole::Contraction:
      if (modulus < 0.0 || modulus >= 1.0) {
        throw Error(ErrorKind::Parameter, "contraction modulus must lie in [0, 1)");
      }
      break;
    case MapRole::Nonexpansive:
      if (modulus < 0.0 || modulus > 1.0) {
        throw Error(ErrorKind::Parameter, "nonexpansive Lipschitz constant must lie in [0, 1]");
      }
      break;
    case MapRole::InverseStronglyMonotone:
      if (modulus <= 0.0) throw Error(ErrorKind::Parameter, "ISM modulus must be positive");
      break;
  }
}

void certify(const MapFunction& fn, std::size_t dim, MapRole role, double modulus,
             const std::optional<ConvexSet>& domain, double sample_radius,
             const std::string& what) {
  const double worst =
      modulus_violation(fn, dim, role, modulus, domain, sample_radius, kModulusSpotCheckPairs);
  if (worst > kSpotCheckTol) {
    std::ostringstream os;
    os << what << " violates its declared " << to_string(role) << " modulus " << modulus
       << " (worst excess " << worst << ")";
    throw Error(ErrorKind::Registry, os.str());
  }
}

double largest_eigenvalue_2x2(double a, double b, double d) {
  // [[a, b], [b, d]]
  const double half_trace = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  return half_trace + std::sqrt(half_gap * half_gap + b * b);
}

double largest_eigenvalue_3x3(const Matrix& g) {
  const double p1 = g(0, 1) * g(0, 1) + g(0, 2) * g(0, 2) + g(1, 2) * g(1, 2);
  if (p1 == 0.0) return std::max({g(0, 0), g(1, 1), g(2, 2)});
  const double q = (g(0, 0) + g(1, 1) + g(2, 2)) / 3.0;
  const double p2 = (g(0, 0) - q) * (g(0, 0) - q) + (g(1, 1) - q) * (g(1, 1) - q) +
                    (g(2, 2) - q) * (g(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  // C = (G − qI)/p; r = det(C)/2
  auto c = [&](std::size_t i, std::size_t j) { return (g(i, j) - (i == j ? q : 0.0)) / p; };
  const double det = c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) -
                     c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0)) +
                     c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0));
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi);
}

double largest_eigenvalue_power(const Matrix& g) {
  const std::size_t n = g.rows();
  // Deterministic start with no special alignment to any coordinate axis.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  double estimate = 0.0;
  for (std::size_t it = 0; it < kPowerIterationMax; ++it) {
    const Vector gv = multiply(g, Vector(v));
    const double len = norm(gv);
    if (len == 0.0) return 0.0;
    double vnorm2 = 0.0;
    for (double e : v) vnorm2 += e * e;
    const double rayleigh = inner(Vector(v), gv) / vnorm2;
    for (std::size_t i = 0; i < n; ++i) v[i] = gv[i] / len;
    if (std::abs(rayleigh - estimate) <= kPowerIterationTol * std::abs(rayleigh)) return rayleigh;
    estimate = rayleigh;
  }
  return estimate;
}

}  // namespace

const char* to_string(MapRole role) noexcept {
  switch (role) {
    case MapRole::Contraction: return "contraction";
    case MapRole::Nonexpansive: return "nonexpansive";
    case MapRole::InverseStronglyMonotone: return "ism";
  }
  return "unknown";
}

Mapping::Mapping(Kind kind, MapRole role, double modulus, std::size_t dim)
    : kind_(std::move(kind)), role_(role), modulus_(modulus), dim_(dim) {
  validate_modulus(role_, modulus_);
}

Mapping Mapping::identity(std::size_t dim, MapRole role) {
  if (dim == 0) throw Error(ErrorKind::Dimension, "identity needs dim >= 1");
  switch (role) {
    case MapRole::Nonexpansive: return Mapping(IdentityMap{}, role, 1.0, dim);
    case MapRole::InverseStronglyMonotone: return Mapping(IdentityMap{}, role, 1.0, dim);
    case MapRole::Contraction: break;
  }
  throw Error(ErrorKind::Parameter, "the identity is not a contraction");
}

Mapping Mapping::trig_contraction() {
  return Mapping(TrigContraction{}, MapRole::Contraction, std::numbers::sqrt2 / 2.0, 2);
}

Mapping Mapping::constant(Vector u) {
  const std::size_t dim = u.dim();
  return Mapping(ConstantAnchor{std::move(u)}, MapRole::Contraction, 0.0, dim);
}

Mapping Mapping::least_squares_gradient(Matrix B, Vector b) {
  if (b.dim() != B.rows()) {
    throw Error(ErrorKind::Dimension, "least squares: b has dim " + std::to_string(b.dim()) +
                                          ", B has " + std::to_string(B.rows()) + " rows");
  }
  const double L = ls_lipschitz(B);
  const std::size_t dim = B.cols();
  return Mapping(LeastSquaresGradient{std::move(B), std::move(b)},
                 MapRole::InverseStronglyMonotone, 1.0 / L, dim);
}

Mapping Mapping::affine(Matrix M, Vector c, MapRole role, double modulus) {
  if (M.rows() != M.cols() || c.dim() != M.rows()) {
    throw Error(ErrorKind::Dimension, "affine map needs square M and matching c");
  }
  validate_modulus(role, modulus);
  const std::size_t dim = c.dim();
  Mapping map(AffineMap{std::move(M), std::move(c)}, role, modulus, dim);
  certify([&map](const Vector& x) { return map.apply(x); }, dim, role, modulus, std::nullopt, 10.0,
          "affine map");
  return map;
}

std::string Mapping::describe() const {
  return std::visit(overloaded{
                        [](const IdentityMap&) -> std::string { return "identity"; },
                        [](const TrigContraction&) -> std::string { return "trig_contraction"; },
                        [](const ConstantAnchor&) -> std::string { return "constant"; },
                        [](const LeastSquaresGradient&) -> std::string {
                          return "least_squares_gradient";
                        },
                        [](const AffineMap&) -> std::string { return "affine"; },
                        [](const CustomMap& c) -> std::string { return "custom:" + c.name; },
                    },
                    kind_);
}

Vector Mapping::apply(const Vector& x) const {
  require_dim(*this, x);
  return std::visit(overloaded{
                        [&](const IdentityMap&) { return x; },
                        [&](const TrigContraction&) {
                          const double s = x[0] + x[1];
                          return Vector{0.5 * (5.0 + std::cos(s)), 0.5 * (6.0 - std::sin(s))};
                        },
                        [&](const ConstantAnchor& c) { return c.u; },
                        [&](const LeastSquaresGradient& g) {
                          return multiply_transposed(g.B, multiply(g.B, x) - g.b);
                        },
                        [&](const AffineMap& a) { return multiply(a.M, x) + a.c; },
                        [&](const CustomMap& c) {
                          Vector y = (*c.fn)(x);
                          if (y.dim() != dim_) {
                            throw Error(ErrorKind::Dimension,
                                        "custom map " + c.name + " returned wrong dimension");
                          }
                          return y;
                        },
                    },
                    kind_);
}

Vector apply(const Mapping& map, const Vector& x) { return map.apply(x); }

double modulus_violation(const MapFunction& fn, std::size_t dim, MapRole role, double modulus,
                         const std::optional<ConvexSet>& domain, double sample_radius,
                         std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-sample_radius, sample_radius);
  auto sample = [&] {
    std::vector<double> v(dim);
    for (double& e : v) e = coord(rng);
    Vector p(std::move(v));
    return domain ? project(*domain, p) : p;
  };

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vector x = sample();
    const Vector y = sample();
    const double d = distance(x, y);
    if (d == 0.0) continue;
    const Vector dF = fn(x) - fn(y);
    double excess = 0.0;
    if (role == MapRole::InverseStronglyMonotone) {
      excess = (modulus * inner(dF, dF) - inner(dF, x - y)) / (d * d);
    } else {
      excess = (norm(dF) - modulus * d) / d;
    }
    worst = std::max(worst, excess);
  }
  return worst;
}

void MappingRegistry::add(const std::string& name, std::size_t dim, MapRole role, double modulus,
                          MapFunction fn, const std::optional<ConvexSet>& domain,
                          double sample_radius) {
  if (name.empty()) throw Error(ErrorKind::Registry, "custom map needs a name");
  if (dim == 0) throw Error(ErrorKind::Dimension, "custom map needs dim >= 1");
  if (!fn) throw Error(ErrorKind::Registry, "custom map " + name + " has no function");
  if (domain && domain->dim() != dim) {
    throw Error(ErrorKind::Dimension, "custom map " + name + " domain has wrong dimension");
  }
  validate_modulus(role, modulus);
  certify(fn, dim, role, modulus, domain, sample_radius, "custom map " + name);
  entries_[name] = Entry{dim, role, modulus, std::make_shared<const MapFunction>(std::move(fn))};
}

bool MappingRegistry::contains(const std::string& name) const { return entries_.count(name) > 0; }

Mapping MappingRegistry::resolve(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorKind::Registry, "unknown custom map '" + name + "'");
  const Entry& e = it->second;
  return Mapping(CustomMap{name, e.fn}, e.role, e.modulus, e.dim);
}

double least_squares_value(const Matrix& B, const Vector& b, const Vector& x) {
  const Vector r = multiply(B, x) - b;
  return 0.5 * inner(r, r);
}

double ls_lipschitz(const Matrix& B) {
  if (B.is_zero()) throw Error(ErrorKind::Parameter, "ls_lipschitz needs a nonzero matrix");
  const Matrix g = gram(B);
  switch (g.rows()) {
    case 1: return g(0, 0);
    case 2: return largest_eigenvalue_2x2(g(0, 0), g(0, 1), g(1, 1));
    case 3: return largest_eigenvalue_3x3(g);
    default: return largest_eigenvalue_power(g);
  }
}

Problem::Problem(ConvexSet Q, Mapping S, Mapping A, Mapping f, std::optional<ConvexSet> omega)
    : Q_(std::move(Q)), S_(std::move(S)), A_(std::move(A)), f_(std::move(f)),
      omega_(std::move(omega)) {
  const std::size_t n = Q_.dim();
  for (const Mapping* m : {&S_, &A_, &f_}) {
    if (m->dim() != n) {
      throw Error(ErrorKind::Dimension,
                  "mapping " + m->describe() + " has dim " + std::to_string(m->dim()) +
                      " but Q has dim " + std::to_string(n));
    }
  }
  if (omega_ && omega_->dim() != n) throw Error(ErrorKind::Dimension, "Omega has wrong dimension");
  if (S_.role() == MapRole::InverseStronglyMonotone) {
    throw Error(ErrorKind::Parameter, "S must be nonexpansive (or a contraction)");
  }
  if (A_.role() != MapRole::InverseStronglyMonotone) {
    throw Error(ErrorKind::Parameter, "A must be inverse strongly monotone");
  }
  if (f_.role() != MapRole::Contraction) throw Error(ErrorKind::Parameter, "f must be a contraction");

  // f(Q) ⊂ Q and S(Q) ⊂ Q on samples.
  std::mt19937_64 rng(0x51a7e);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(n);
    for (double& e : v) e = coord(rng);
    const Vector q = project(Q_, Vector(std::move(v)));
    if (!contains(Q_, f_.apply(q), 1e-8)) {
      throw Error(ErrorKind::Parameter, "f does not map Q into Q");
    }
    if (!contains(Q_, S_.apply(q), 1e-8)) {
      throw Error(ErrorKind::Parameter, "S does not map Q into Q");
    }
  }
}

std::string Problem::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "Q=" << Q_.describe() << ";S=" << S_.describe() << ";A=" << A_.describe()
     << "(nu=" << nu() << ");f=" << f_.describe() << "(rho=" << rho() << ")";
  if (omega_) os << ";Omega=" << omega_->describe();
  return os.str();
}

Vector forward_step(const Vector& x, const Mapping& A, double lambda, Diagnostics* diag) {
  if (A.role() != MapRole::InverseStronglyMonotone) {
    throw Error(ErrorKind::Parameter, "forward_step needs an ISM operator");
  }
  const double upper = 2.0 * A.modulus();
  if (!std::isfinite(lambda)) throw Error(ErrorKind::NonFinite, "step size is not finite");
  if ((lambda < 0.0 || lambda > upper) && diag != nullptr) {
    std::ostringstream os;
    os.precision(17);
    os << "step size " << lambda << " outside [0, 2nu] = [0, " << upper << "]";
    diag->schedule_violation(os.str());
  }
  return x - lambda * A.apply(x);
}

Vector theta_map(const Vector& x, const Problem& problem, double lambda, Diagnostics* diag) {
  return project(problem.set(), forward_step(x, problem.A(), lambda, diag));
}

Vector viscosity_map(const Vector& x, const Problem& problem, double t, double mu,
                     Diagnostics* diag) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::Parameter, "viscosity_map needs t in (0, 1], got " + std::to_string(t));
  }
  return convex_combination(t, problem.f().apply(x),
                            problem.S().apply(theta_map(x, problem, mu, diag)));
}

}  // namespace visc
