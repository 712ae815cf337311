#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace tl {

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace detail

struct Hnf {
  IntMatrix h;  // h = u * m
  IntMatrix u;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of row i, i < rank
};

// Row Hermite normal form: positive pivots, entries above a pivot reduced into [0, pivot).
inline Hnf hnf(const IntMatrix& m) {
  Hnf r{m, IntMatrix::identity(m.rows()), 0, {}};
  IntMatrix& h = r.h;
  IntMatrix& u = r.u;
  const std::size_t rows = m.rows();
  std::size_t p = 0;
  for (std::size_t c = 0; c < m.cols() && p < rows; ++c) {
    for (;;) {
      std::size_t best = rows;
      for (std::size_t i = p; i < rows; ++i)
        if (h(i, c) != 0 && (best == rows || abs(h(i, c)) < abs(h(best, c)))) best = i;
      if (best == rows) break;
      h.swap_rows(p, best);
      u.swap_rows(p, best);
      bool clean = true;
      for (std::size_t i = p + 1; i < rows; ++i) {
        if (h(i, c) == 0) continue;
        Integer q = h(i, c) / h(p, c);
        h.sub_row(i, p, q);
        u.sub_row(i, p, q);
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h(p, c) == 0) continue;
    if (h(p, c) < 0) {
      h.negate_row(p);
      u.negate_row(p);
    }
    for (std::size_t i = 0; i < p; ++i) {
      Integer q = detail::floor_div(h(i, c), h(p, c));
      h.sub_row(i, p, q);
      u.sub_row(i, p, q);
    }
    r.pivots.push_back(c);
    ++p;
  }
  r.rank = p;
  return r;
}

struct Snf {
  IntMatrix s;  // s = u * m * v, diagonal with s_1 | s_2 | ...
  IntMatrix u, v;
};

inline Snf snf(const IntMatrix& m) {
  Snf r{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  IntMatrix& s = r.s;
  const std::size_t R = m.rows(), C = m.cols();
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    // smallest nonzero entry of the trailing submatrix goes to the pivot
    std::size_t bi = R, bj = C;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (s(i, j) != 0 && (bi == R || abs(s(i, j)) < abs(s(bi, bj)))) { bi = i; bj = j; }
    if (bi == R) break;
    s.swap_rows(t, bi);
    r.u.swap_rows(t, bi);
    s.swap_cols(t, bj);
    r.v.swap_cols(t, bj);
    for (;;) {
      bool done = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (s(i, t) == 0) continue;
        Integer q = s(i, t) / s(t, t);
        s.sub_row(i, t, q);
        r.u.sub_row(i, t, q);
        if (s(i, t) != 0) done = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (s(t, j) == 0) continue;
        Integer q = s(t, j) / s(t, t);
        s.sub_col(j, t, q);
        r.v.sub_col(j, t, q);
        if (s(t, j) != 0) done = false;
      }
      if (!done) {
        // a remainder survived: move the smallest one in row/col t to the pivot
        std::size_t bi2 = t, bj2 = t;
        for (std::size_t i = t + 1; i < R; ++i)
          if (s(i, t) != 0 && abs(s(i, t)) < abs(s(bi2, bj2))) { bi2 = i; bj2 = t; }
        for (std::size_t j = t + 1; j < C; ++j)
          if (s(t, j) != 0 && abs(s(t, j)) < abs(s(bi2, bj2))) { bi2 = t; bj2 = j; }
        s.swap_rows(t, bi2);
        r.u.swap_rows(t, bi2);
        s.swap_cols(t, bj2);
        r.v.swap_cols(t, bj2);
        continue;
      }
      // divisibility: fold an offending row into the pivot row and go again
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (s(i, j) % s(t, t) != 0) { bad = i; break; }
      if (bad == R) break;
      s.sub_row(t, bad, Integer(-1));
      r.u.sub_row(t, bad, Integer(-1));
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      r.u.negate_row(t);
    }
  }
  return r;
}

// nonzero invariant factors of m
inline std::vector<Integer> invariant_factors(const IntMatrix& m) {
  Snf f = snf(m);
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (f.s(i, i) != 0) out.push_back(f.s(i, i));
  return out;
}

// fraction-free (Bareiss) determinant
inline Integer det(const IntMatrix& m) {
  if (!m.square()) throw ShapeMismatch("det of " + m.shape());
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline Z2 unit_det(const IntMatrix& m) {
  Integer d = det(m);
  if (d == 1) return 0;
  if (d == -1) return 1;
  throw NotAUnit("determinant " + d.str());
}

inline std::size_t rank(const IntMatrix& m) { return hnf(m).rank; }

// columns form a basis of the integer kernel of m
inline IntMatrix kernel_basis(const IntMatrix& m) {
  Hnf f = hnf(m.transpose());
  const std::size_t n = m.cols(), k = n - f.rank;
  IntMatrix out(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) out(i, j) = f.u(f.rank + j, i);
  return out;
}

// integral solution of m x = b, or nothing
inline std::optional<IntMatrix> try_solve_integral(const IntMatrix& m, const IntMatrix& b) {
  if (m.rows() != b.rows()) throw ShapeMismatch("solve " + m.shape() + " x = " + b.shape());
  // u m^T = h, so m = h^T u^{-T}; solve h^T y = b and return x = u^T y
  Hnf f = hnf(m.transpose());
  const std::size_t n = m.cols();
  IntMatrix y(n, b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t j = 0; j < f.rank; ++j) {
      const std::size_t cj = f.pivots[j];
      Integer s = b(cj, col);
      for (std::size_t i = 0; i < j; ++i)
        if (f.h(i, cj) != 0) s -= f.h(i, cj) * y(i, col);
      if (s % f.h(j, cj) != 0) return std::nullopt;
      y(j, col) = s / f.h(j, cj);
    }
    for (std::size_t row = 0; row < m.rows(); ++row) {
      Integer s = 0;
      for (std::size_t i = 0; i < f.rank; ++i)
        if (f.h(i, row) != 0) s += f.h(i, row) * y(i, col);
      if (s != b(row, col)) return std::nullopt;
    }
  }
  return f.u.transpose() * y;
}

inline IntMatrix solve_integral(const IntMatrix& m, const IntMatrix& b) {
  auto x = try_solve_integral(m, b);
  if (!x) throw NoIntegerSolution(m.shape() + " system has no integral solution");
  return *x;
}

inline IntMatrix inverse_unimodular(const IntMatrix& p) {
  if (!p.square()) throw ShapeMismatch("inverse of " + p.shape());
  auto x = try_solve_integral(p, IntMatrix::identity(p.rows()));
  if (!x) throw NotAUnit("matrix is not invertible over the integers");
  return *x;
}

// rank over Q by elimination on a rational copy
inline std::size_t rank_q(RatMatrix a) {
  std::size_t p = 0;
  for (std::size_t c = 0; c < a.cols() && p < a.rows(); ++c) {
    std::size_t piv = p;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(p, piv);
    for (std::size_t i = p + 1; i < a.rows(); ++i)
      if (a(i, c) != 0) a.sub_row(i, p, Rational(a(i, c) / a(p, c)));
    ++p;
  }
  return p;
}

struct Inertia {
  std::size_t pos = 0, neg = 0, zero = 0;
  long long signature() const { return static_cast<long long>(pos) - static_cast<long long>(neg); }
};

// congruence diagonalisation over Q
inline Inertia inertia(RatMatrix q) {
  if (!q.square()) throw NotSymmetric("shape " + q.shape());
  const std::size_t n = q.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (q(i, j) != q(j, i)) throw NotSymmetric("entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  auto add_sym = [&](std::size_t i, std::size_t j) {  // row i += row j, col i += col j
    q.sub_row(i, j, Rational(-1));
    q.sub_col(i, j, Rational(-1));
  };
  auto swap_sym = [&](std::size_t i, std::size_t j) {
    q.swap_rows(i, j);
    q.swap_cols(i, j);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (q(i, i) == 0) {
      std::size_t j = i + 1;
      while (j < n && q(j, i) == 0) ++j;
      if (j == n) continue;
      if (q(j, j) != 0) swap_sym(i, j);
      else add_sym(i, j);
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (q(j, i) == 0) continue;
      Rational f = q(j, i) / q(i, i);
      q.sub_row(j, i, f);
      q.sub_col(j, i, f);
    }
  }
  Inertia r;
  for (std::size_t i = 0; i < n; ++i) {
    if (q(i, i) > 0) ++r.pos;
    else if (q(i, i) < 0) ++r.neg;
    else ++r.zero;
  }
  return r;
}

}  // namespace tl
