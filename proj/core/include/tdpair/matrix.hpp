#pragma once

// Dense exact matrices.  Dimensions here never exceed a few dozen, so a
// row-major std::vector is all the structure we need.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdpair/error.hpp"
#include "tdpair/scalar.hpp"

namespace tdpair {

template <class S>
using Vector = std::vector<S>;

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& zero)
      : rows_(rows), cols_(cols), data_(rows * cols, zero) {}

  static Matrix identity(std::size_t n, const S& zero, const S& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  template <class F>
  static Matrix zeros(const F& field, std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, field.zero());
  }
  template <class F>
  static Matrix identity(const F& field, std::size_t n) {
    return identity(n, field.zero(), field.one());
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const S> row(std::size_t r) const {
    return std::span<const S>(data_).subspan(r * cols_, cols_);
  }

  Vector<S> column(std::size_t c) const {
    Vector<S> v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
  }

  bool is_zero() const {
    for (const S& x : data_) {
      if (!tdpair::is_zero(x)) return false;
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.data_.reserve(data_.size());
    for (std::size_t c = 0; c < cols_; ++c)
      for (std::size_t r = 0; r < rows_; ++r) t.data_.push_back((*this)(r, c));
    return t;
  }

  Matrix& operator+=(const Matrix& rhs) {
    require_same_shape(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& rhs) {
    require_same_shape(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& k) {
    for (S& x : data_) x *= k;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& k) { return a *= k; }
  friend Matrix operator*(const S& k, Matrix a) { return a *= k; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error("matrix product dimension mismatch: " + a.shape() + " * " + b.shape());
    }
    Matrix c(a.rows_, b.cols_, a.zero_like(b));
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (tdpair::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const S& bkj = b(k, j);
          if (!tdpair::is_zero(bkj)) c(i, j) += aik * bkj;
        }
      }
    }
    return c;
  }

  friend Vector<S> operator*(const Matrix& a, const Vector<S>& v) {
    if (a.cols_ != v.size()) throw Error("matrix-vector dimension mismatch");
    Vector<S> out;
    out.reserve(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      S acc = v.empty() ? S{} : v[0] - v[0];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (!tdpair::is_zero(a(i, k)) && !tdpair::is_zero(v[k])) acc += a(i, k) * v[k];
      }
      out.push_back(std::move(acc));
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_same_shape(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
      throw Error("matrix shape mismatch: " + shape() + " vs " + rhs.shape());
    }
  }
  // A zero of the right field, taken from any available entry.
  S zero_like(const Matrix& other) const {
    if (!data_.empty()) return data_[0] - data_[0];
    if (!other.data_.empty()) return other.data_[0] - other.data_[0];
    return S{};
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

// Reduced row echelon form; `pivots[k]` is the pivot column of row k.
template <class S>
struct Echelon {
  Matrix<S> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const noexcept { return pivots.size(); }
};

template <class S>
Echelon<S> row_reduce(Matrix<S> m) {
  std::vector<std::size_t> pivots;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
    std::size_t r = pivot_row;
    while (r < m.rows() && is_zero(m(r, c))) ++r;
    if (r == m.rows()) continue;
    if (r != pivot_row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(pivot_row, j));
    }
    const S inv = inverse(m(pivot_row, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(pivot_row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == pivot_row || is_zero(m(i, c))) continue;
      const S factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!is_zero(m(pivot_row, j))) m(i, j) -= factor * m(pivot_row, j);
      }
    }
    pivots.push_back(c);
    ++pivot_row;
  }
  return {std::move(m), std::move(pivots)};
}

template <class S>
std::size_t rank(const Matrix<S>& m) {
  return row_reduce(m).rank();
}

// Matrix whose columns are the given vectors (all of equal length).
template <class S>
Matrix<S> from_columns(std::span<const Vector<S>> columns, std::size_t rows, const S& zero) {
  Matrix<S> m(rows, columns.size(), zero);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error("from_columns: ragged input");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

template <class S>
bool is_zero_vector(const Vector<S>& v) {
  for (const S& x : v) {
    if (!is_zero(x)) return false;
  }
  return true;
}

}  // namespace tdpair
