#include "visc/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "visc/error.hpp"

namespace visc {

namespace {

void require_finite(std::span<const double> values, const char* where) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::NonFinite, std::string(where) + ": entry " + std::to_string(i) +
                                            " is not finite");
    }
  }
}

void require_same_dim(const Vector& x, const Vector& y, const char* where) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorKind::Dimension, std::string(where) + ": dimensions " +
                                          std::to_string(x.dim()) + " and " +
                                          std::to_string(y.dim()) + " differ");
  }
}

template <typename Op>
Vector zip(const Vector& x, const Vector& y, const char* where, Op op) {
  require_same_dim(x, y, where);
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
  return Vector(std::move(out));
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::Dimension, "vector must have dim >= 1");
  require_finite(entries_, "vector");
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

Vector Vector::zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

Vector Vector::constant(std::size_t dim, double value) {
  return Vector(std::vector<double>(dim, value));
}

Vector operator+(const Vector& x, const Vector& y) {
  return zip(x, y, "add", [](double a, double b) { return a + b; });
}

Vector operator-(const Vector& x, const Vector& y) {
  return zip(x, y, "subtract", [](double a, double b) { return a - b; });
}

Vector operator-(const Vector& x) { return -1.0 * x; }

Vector operator*(double s, const Vector& x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v *= s;
  return Vector(std::move(out));
}

Vector operator*(const Vector& x, double s) { return s * x; }

double inner(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "inner");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) sum += x[i] * y[i];
  return sum;
}

double norm(const Vector& x) {
  return std::sqrt(inner(x, x));
}

double distance(const Vector& x, const Vector& y) { return norm(x - y); }

Vector convex_combination(double s, const Vector& x, const Vector& y) {
  const double r = 1.0 - s;
  return zip(x, y, "convex_combination", [s, r](double a, double b) { return s * a + r * b; });
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows_ == 0 || cols_ == 0) throw Error(ErrorKind::Dimension, "matrix must be non-empty");
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::Dimension, "matrix data has " + std::to_string(data_.size()) +
                                          " entries, expected " +
                                          std::to_string(rows_ * cols_));
  }
  require_finite(data_, "matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (rows_ == 0 || cols_ == 0) throw Error(ErrorKind::Dimension, "matrix must be non-empty");
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::Dimension, "ragged matrix rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return Matrix(n, n, std::move(d));
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

Vector multiply(const Matrix& m, const Vector& x) {
  if (x.dim() != m.cols()) {
    throw Error(ErrorKind::Dimension, "matrix has " + std::to_string(m.cols()) +
                                          " columns, vector has dim " + std::to_string(x.dim()));
  }
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * x[c];
  }
  return Vector(std::move(out));
}

Vector multiply_transposed(const Matrix& m, const Vector& y) {
  if (y.dim() != m.rows()) {
    throw Error(ErrorKind::Dimension, "matrix has " + std::to_string(m.rows()) +
                                          " rows, vector has dim " + std::to_string(y.dim()));
  }
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += m(r, c) * y[r];
  }
  return Vector(std::move(out));
}

Matrix gram(const Matrix& m) {
  const std::size_t n = m.cols();
  std::vector<double> g(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, i) * m(r, j);
      g[i * n + j] = s;
    }
  }
  return Matrix(n, n, std::move(g));
}

}  // namespace visc
