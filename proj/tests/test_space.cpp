#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "visc/error.hpp"
#include "visc/space.hpp"

using namespace visc;

namespace {

Vector random_vector(std::mt19937_64& rng, std::size_t dim, double r = 10.0) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<double> v(dim);
  for (double& c : v) c = u(rng);
  return Vector(v);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("norm examples") {
  CHECK(norm(Vector{3.0, 4.0}) == 5.0);
  CHECK(norm(Vector::zeros(2)) == 0.0);
  CHECK(norm(Vector{1.0, 1.0}) == doctest::Approx(1.41421356).epsilon(1e-8));
}

TEST_CASE("construction rejects empty and non-finite input") {
  CHECK(kind_of([] { (void)Vector(std::vector<double>{}); }) == ErrorKind::Dimension);
  CHECK(kind_of([] { (void)Vector{1.0, std::nan("")}; }) == ErrorKind::NonFinite);
  CHECK(kind_of([] { (void)Vector{std::numeric_limits<double>::infinity()}; }) == ErrorKind::NonFinite);
  const double big = std::numeric_limits<double>::max();
  CHECK(kind_of([&] { (void)(Vector{big} + Vector{big}); }) == ErrorKind::NonFinite);
}

TEST_CASE("inner product and dimension checks") {
  CHECK(inner(Vector{1.0, 2.0}, Vector{3.0, 4.0}) == 11.0);
  CHECK(kind_of([] { (void)inner(Vector{1.0}, Vector{1.0, 2.0}); }) == ErrorKind::Dimension);
  CHECK(kind_of([] { (void)(Vector{1.0} + Vector{1.0, 2.0}); }) == ErrorKind::Dimension);
  CHECK(distance(Vector{0.0, 0.0}, Vector{3.0, 4.0}) == 5.0);
}

TEST_CASE("arithmetic") {
  const Vector x{1.0, -2.0};
  const Vector y{0.5, 4.0};
  CHECK(x + y == Vector{1.5, 2.0});
  CHECK(x - y == Vector{0.5, -6.0});
  CHECK(-x == Vector{-1.0, 2.0});
  CHECK(2.0 * x == Vector{2.0, -4.0});
  CHECK(x * 2.0 == Vector{2.0, -4.0});
  CHECK(convex_combination(0.25, x, y) == Vector{0.25 * 1.0 + 0.75 * 0.5, 0.25 * -2.0 + 0.75 * 4.0});
}

TEST_CASE("inequalities on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vector u = random_vector(rng, 3);
    const Vector v = random_vector(rng, 3);
    CHECK(std::abs(inner(u, v)) <= norm(u) * norm(v) * (1 + 1e-15));
    const double t = unit(rng);
    const double lhs = std::pow(norm(t * u + (1 - t) * v), 2);
    CHECK(lhs <= t * inner(u, u) + (1 - t) * inner(v, v) + 1e-10);
    CHECK(inner(u + v, u + v) <= inner(u, u) + 2 * inner(v, u + v) + 1e-10);
  }
}

TEST_CASE("matrix products") {
  const Matrix B{{1.0, 1.0}, {2.0, 2.0}};
  CHECK(multiply(B, Vector{2.0, 3.0}) == Vector{5.0, 10.0});
  CHECK(multiply_transposed(B, Vector{2.0, 5.0}) == Vector{12.0, 12.0});
  const Matrix G = gram(B);
  CHECK(G(0, 0) == 5.0);
  CHECK(G(0, 1) == 5.0);
  CHECK(G(1, 1) == 5.0);
  CHECK(Matrix::identity(2)(1, 1) == 1.0);
  CHECK(Matrix(2, 2, {0, 0, 0, 0}).is_zero());
  CHECK(kind_of([] { (void)Matrix(2, 2, {1, 2, 3}); }) == ErrorKind::Dimension);
}
