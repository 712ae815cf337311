#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace tl {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// an element of Z/2, written additively
struct Z2 {
  int bit = 0;

  Z2() = default;
  constexpr Z2(int b) : bit(((b % 2) + 2) % 2) {}
  static Z2 of(const Integer& v) { return Z2(static_cast<int>(v & 1)); }
  static Z2 of(long long v) { return Z2(static_cast<int>(v & 1)); }

  friend Z2 operator+(Z2 a, Z2 b) { return Z2(a.bit ^ b.bit); }
  friend Z2 operator*(Z2 a, Z2 b) { return Z2(a.bit & b.bit); }
  Z2& operator+=(Z2 o) { bit ^= o.bit; return *this; }
  friend bool operator==(Z2 a, Z2 b) { return a.bit == b.bit; }
  friend bool operator!=(Z2 a, Z2 b) { return a.bit != b.bit; }
  friend std::ostream& operator<<(std::ostream& os, Z2 a) { return os << a.bit; }
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (auto& r : rows) {
      if (r.size() != cols_) throw ShapeMismatch("ragged initializer");
      for (long long v : r) a_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<T>& data() const { return a_; }

  bool is_zero() const {
    for (auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeMismatch("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ShapeMismatch("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  // row operations used by the normal form routines
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }
  // row i -= q * row j
  void sub_row(std::size_t i, std::size_t j, const T& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(j, c) != 0) (*this)(i, c) -= q * (*this)(j, c);
  }
  void sub_col(std::size_t i, std::size_t j, const T& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < rows_; ++r)
      if ((*this)(r, j) != 0) (*this)(r, i) -= q * (*this)(r, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
  }

  Matrix operator-() const {
    Matrix m(*this);
    for (auto& x : m.a_) x = -x;
    return m;
  }
  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ShapeMismatch("product " + a.shape() + " * " + b.shape());
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend Matrix operator*(const T& s, Matrix m) {
    for (auto& x : m.a_) x *= s;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
      os << "]";
    }
    return os << "]";
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch(shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

// (-1)^e * m
inline IntMatrix signed_by(long long e, IntMatrix m) { return (e % 2 != 0) ? -std::move(m) : std::move(m); }

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

// block matrix from a grid of row/col sizes; unset blocks are zero
class BlockBuilder {
 public:
  BlockBuilder(std::vector<std::size_t> rows, std::vector<std::size_t> cols)
      : rs_(std::move(rows)), cs_(std::move(cols)) {
    std::size_t r = 0, c = 0;
    for (auto x : rs_) { ro_.push_back(r); r += x; }
    for (auto x : cs_) { co_.push_back(c); c += x; }
    m_ = IntMatrix(r, c);
  }
  BlockBuilder& set(std::size_t i, std::size_t j, const IntMatrix& b) {
    if (b.rows() != rs_.at(i) || b.cols() != cs_.at(j))
      throw ShapeMismatch("block (" + std::to_string(i) + "," + std::to_string(j) + ") is " + b.shape());
    m_.set_block(ro_[i], co_[j], b);
    return *this;
  }
  IntMatrix get(std::size_t i, std::size_t j) const { return m_.block(ro_.at(i), co_.at(j), rs_[i], cs_[j]); }
  const IntMatrix& matrix() const { return m_; }

 private:
  std::vector<std::size_t> rs_, cs_, ro_, co_;
  IntMatrix m_;
};

inline IntMatrix block_diag(const std::vector<IntMatrix>& ms) {
  std::vector<std::size_t> r, c;
  for (auto& m : ms) { r.push_back(m.rows()); c.push_back(m.cols()); }
  BlockBuilder b(r, c);
  for (std::size_t i = 0; i < ms.size(); ++i) b.set(i, i, ms[i]);
  return b.matrix();
}

inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeMismatch("hstack " + a.shape() + " | " + b.shape());
  IntMatrix m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

// Kronecker product; basis of the product ordered lexicographically (i of a, then j of b)
inline IntMatrix kron(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t x = 0; x < b.rows(); ++x)
        for (std::size_t y = 0; y < b.cols(); ++y)
          if (b(x, y) != 0) m(i * b.rows() + x, j * b.cols() + y) = a(i, j) * b(x, y);
    }
  return m;
}

}  // namespace tl
