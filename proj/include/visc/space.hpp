#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace visc {

/// Default absolute tolerance for equality comparisons of reals.
inline constexpr double kEqualityTol = 1e-12;

/// Point of R^n with the Euclidean inner product.
///
/// Immutable once constructed. Construction rejects an empty coordinate list
/// and any NaN/Inf entry, so every Vector in the program is finite; the
/// arithmetic operators re-validate their results, which turns overflow in
/// an iteration into a NonFinite error at the step that produced it.
class Vector {
 public:
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  static Vector zeros(std::size_t dim);
  static Vector constant(std::size_t dim, double value);

  [[nodiscard]] std::size_t dim() const noexcept { return entries_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return entries_[i]; }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

  [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
  [[nodiscard]] auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> entries_;
};

[[nodiscard]] Vector operator+(const Vector& x, const Vector& y);
[[nodiscard]] Vector operator-(const Vector& x, const Vector& y);
[[nodiscard]] Vector operator-(const Vector& x);
[[nodiscard]] Vector operator*(double s, const Vector& x);
[[nodiscard]] Vector operator*(const Vector& x, double s);

/// Σ x_i y_i. Throws a Dimension error when the dimensions differ.
[[nodiscard]] double inner(const Vector& x, const Vector& y);
[[nodiscard]] double norm(const Vector& x);
[[nodiscard]] double distance(const Vector& x, const Vector& y);

/// s·x + (1−s)·y, evaluated coordinatewise as s*x_i + (1−s)*y_i.
/// Every algorithm mixes through this helper so equivalent schemes agree bit for bit.
[[nodiscard]] Vector convex_combination(double s, const Vector& x, const Vector& y);

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] bool is_zero() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// M x
[[nodiscard]] Vector multiply(const Matrix& m, const Vector& x);
/// Mᵀ y
[[nodiscard]] Vector multiply_transposed(const Matrix& m, const Vector& y);
/// Mᵀ M
[[nodiscard]] Matrix gram(const Matrix& m);

}  // namespace visc
