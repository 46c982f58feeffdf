#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/numeric/rational.hpp"
#include "bmdist/numeric/scalar.hpp"

namespace bmdist {

// Row-major dense matrix over Rational or double.
template <class T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw DimensionError("entry count does not match shape");
  }
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<T>& data() const { return data_; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  DenseMatrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = DenseMatrix<Rational>;
using RealMatrix = DenseMatrix<double>;

// Direct sum (block diagonal assembly).
template <class T>
DenseMatrix<T> direct_sum(std::span<const DenseMatrix<T>> blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!b.square()) throw DimensionError("direct sum needs square blocks");
    n += b.rows();
  }
  DenseMatrix<T> out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

inline RealMatrix to_real(const RationalMatrix& m) {
  std::vector<double> d;
  d.reserve(m.data().size());
  for (const auto& x : m.data()) d.push_back(to_double(x));
  return RealMatrix(m.rows(), m.cols(), std::move(d));
}

inline RationalMatrix to_rational(const RealMatrix& m) {
  std::vector<Rational> d;
  d.reserve(m.data().size());
  for (double x : m.data()) d.push_back(rational_from_double(x));
  return RationalMatrix(m.rows(), m.cols(), std::move(d));
}

namespace detail {

// Multiplies each row of `m` by the lcm of its denominators. Returns the
// integer matrix and the per-row multipliers.
inline std::pair<std::vector<Integer>, std::vector<Integer>> clear_row_denominators(const RationalMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  std::vector<Integer> ints(r * c);
  std::vector<Integer> mult(r, Integer(1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) mult[i] = lcm(mult[i], m(i, j).get_den());
    for (std::size_t j = 0; j < c; ++j) ints[i * c + j] = m(i, j).get_num() * (mult[i] / m(i, j).get_den());
  }
  return {std::move(ints), std::move(mult)};
}

// Bareiss fraction-free determinant of an n x n integer matrix (destroys `a`).
template <class Int>
Int bareiss_determinant(std::vector<Int>& a, std::size_t n) {
  if (n == 0) return Int(1);
  Int prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return Int(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    const Int pivot = a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Int lead = a[i * n + k];
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i * n + j] = (pivot * a[i * n + j] - lead * a[k * n + j]) / prev;
      }
      a[i * n + k] = 0;
    }
    prev = pivot;
  }
  Int d = a[(n - 1) * n + (n - 1)];
  return sign < 0 ? Int(-d) : d;
}

}  // namespace detail

// Exact determinant via Bareiss elimination on the row-scaled integer matrix.
inline Rational determinant(const RationalMatrix& m) {
  if (!m.square()) throw DimensionError("determinant of non-square matrix");
  auto [ints, mult] = detail::clear_row_denominators(m);
  Integer det = detail::bareiss_determinant(ints, m.rows());
  Integer scale(1);
  for (const auto& s : mult) scale *= s;
  return make_rational(det, scale);
}

// LU with partial pivoting.
inline double determinant(const RealMatrix& m) {
  if (!m.square()) throw DimensionError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<double> a = m.data();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i * n + k]) > std::fabs(a[p * n + k])) p = i;
    if (a[p * n + k] == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      det = -det;
    }
    const double pivot = a[k * n + k];
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

// Exact inverse by fraction-free Gauss-Jordan on [B | I], where B is the
// row-scaled integer form of `m`. Every intermediate is a minor of the
// augmented matrix, so all divisions are exact.
inline RationalMatrix invert(const RationalMatrix& m) {
  if (!m.square()) throw DimensionError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  auto [ints, mult] = detail::clear_row_denominators(m);
  const std::size_t w = 2 * n;
  std::vector<Integer> a(n * w, Integer(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * w + j] = ints[i * n + j];
    a[i * w + n + i] = 1;
  }
  Integer prev(1);
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k * w + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * w + k] == 0) ++p;
      if (p == n) throw SingularMatrixError("matrix is singular");
      for (std::size_t j = 0; j < w; ++j) std::swap(a[k * w + j], a[p * w + j]);
    }
    const Integer pivot = a[k * w + k];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Integer lead = a[i * w + k];
      for (std::size_t j = 0; j < w; ++j) {
        if (j == k) continue;
        a[i * w + j] = (pivot * a[i * w + j] - lead * a[k * w + j]) / prev;
      }
      a[i * w + k] = 0;
    }
    prev = pivot;
  }
  // Left block is now prev * I; B^{-1} = right / prev and A^{-1} = B^{-1} D.
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = make_rational(a[i * w + n + j] * mult[j], prev);
  return inv;
}

// Relative pivot threshold below which a float matrix counts as singular.
inline constexpr double kFloatPivotEpsilon = 1e-14;

// Gauss-Jordan with partial pivoting.
inline RealMatrix invert(const RealMatrix& m) {
  if (!m.square()) throw DimensionError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (double x : m.data()) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0 && n > 0) throw SingularMatrixError("matrix is singular");
  const std::size_t w = 2 * n;
  std::vector<double> a(n * w, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * w + j] = m(i, j);
    a[i * w + n + i] = 1.0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i * w + k]) > std::fabs(a[p * w + k])) p = i;
    if (std::fabs(a[p * w + k]) <= kFloatPivotEpsilon * scale) throw SingularMatrixError("matrix is singular");
    if (p != k)
      for (std::size_t j = 0; j < w; ++j) std::swap(a[k * w + j], a[p * w + j]);
    const double pivot = a[k * w + k];
    for (std::size_t j = 0; j < w; ++j) a[k * w + j] /= pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = a[i * w + k];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) a[i * w + j] -= f * a[k * w + j];
    }
  }
  RealMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = a[i * w + n + j];
  return inv;
}

// A square or rectangular matrix whose entries share one Mode.
class Matrix {
 public:
  Matrix() : body_(RationalMatrix()) {}
  Matrix(RationalMatrix m) : body_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  Matrix(RealMatrix m) : body_(std::move(m)) {}      // NOLINT(google-explicit-constructor)

  // Builds from uniform-mode scalars; mixed modes throw ModeError.
  static Matrix from_scalars(std::size_t rows, std::size_t cols, const std::vector<Scalar>& entries) {
    if (entries.size() != rows * cols) throw DimensionError("entry count does not match shape");
    if (entries.empty()) return Matrix(RationalMatrix(rows, cols));
    const Mode mode = entries.front().mode();
    for (const auto& e : entries)
      if (e.mode() != mode) throw ModeError("matrix entries must share one mode");
    if (mode == Mode::exact) {
      std::vector<Rational> d;
      for (const auto& e : entries) d.push_back(e.rational());
      return Matrix(RationalMatrix(rows, cols, std::move(d)));
    }
    std::vector<double> d;
    for (const auto& e : entries) d.push_back(e.floating());
    return Matrix(RealMatrix(rows, cols, std::move(d)));
  }

  static Matrix identity(std::size_t n, Mode mode = Mode::exact) {
    if (mode == Mode::exact) return Matrix(RationalMatrix::identity(n));
    return Matrix(RealMatrix::identity(n));
  }

  Mode mode() const { return std::holds_alternative<RationalMatrix>(body_) ? Mode::exact : Mode::floating; }
  std::size_t rows() const { return std::visit([](const auto& m) { return m.rows(); }, body_); }
  std::size_t cols() const { return std::visit([](const auto& m) { return m.cols(); }, body_); }
  bool square() const { return rows() == cols(); }

  Scalar at(std::size_t i, std::size_t j) const {
    return std::visit([&](const auto& m) { return Scalar(m(i, j)); }, body_);
  }

  const RationalMatrix& exact() const {
    if (mode() != Mode::exact) throw ModeError("matrix is not exact");
    return std::get<RationalMatrix>(body_);
  }
  const RealMatrix& floating() const {
    if (mode() != Mode::floating) throw ModeError("matrix is not floating");
    return std::get<RealMatrix>(body_);
  }
  RealMatrix as_real() const { return mode() == Mode::exact ? to_real(exact()) : floating(); }

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), body_);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.body_ == b.body_; }

 private:
  std::variant<RationalMatrix, RealMatrix> body_;
};

inline Scalar determinant(const Matrix& m) {
  return m.visit([](const auto& x) { return Scalar(determinant(x)); });
}

inline Matrix invert(const Matrix& m) {
  return m.visit([](const auto& x) { return Matrix(invert(x)); });
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.mode() != b.mode()) throw ModeError("mixed-mode matrix product");
  if (a.mode() == Mode::exact) return Matrix(a.exact() * b.exact());
  return Matrix(a.floating() * b.floating());
}

inline Matrix transpose(const Matrix& m) {
  return m.visit([](const auto& x) { return Matrix(x.transpose()); });
}

}  // namespace bmdist
