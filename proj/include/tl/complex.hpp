#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace tl {

// Finite based free Z-complex in degrees 0..N with a sign in Z/2.
class SignedComplex {
 public:
  SignedComplex() : ranks_{0}, d_{IntMatrix(0, 0)} {}

  // diffs[r-1] is d_r : C_r -> C_{r-1}, r = 1..N
  SignedComplex(std::vector<std::size_t> ranks, std::vector<IntMatrix> diffs, Z2 eta = 0)
      : ranks_(std::move(ranks)), eta_(eta) {
    if (ranks_.empty()) ranks_.push_back(0);
    if (diffs.size() + 1 != ranks_.size())
      throw ShapeMismatch("need " + std::to_string(ranks_.size() - 1) + " differentials, got " +
                          std::to_string(diffs.size()));
    d_.reserve(ranks_.size());
    d_.emplace_back(0, ranks_[0]);
    for (std::size_t r = 1; r < ranks_.size(); ++r) {
      auto& m = diffs[r - 1];
      if (m.rows() != ranks_[r - 1] || m.cols() != ranks_[r])
        throw ShapeMismatch("d_" + std::to_string(r) + " is " + m.shape());
      d_.push_back(std::move(m));
    }
    for (std::size_t r = 2; r < ranks_.size(); ++r)
      if (!(d_[r - 1] * d_[r]).is_zero()) throw NotAComplex("d_" + std::to_string(r - 1) + " d_" + std::to_string(r) + " != 0");
  }

  // complex with zero differentials
  static SignedComplex free(std::vector<std::size_t> ranks, Z2 eta = 0) {
    std::vector<IntMatrix> d;
    for (std::size_t r = 1; r < ranks.size(); ++r) d.emplace_back(ranks[r - 1], ranks[r]);
    return SignedComplex(std::move(ranks), std::move(d), eta);
  }

  int top() const { return static_cast<int>(ranks_.size()) - 1; }
  std::size_t rank(int r) const { return (r >= 0 && r <= top()) ? ranks_[r] : 0; }
  const std::vector<std::size_t>& ranks() const { return ranks_; }

  // d_r : C_r -> C_{r-1}; zero of the right shape outside 1..N
  IntMatrix diff(int r) const {
    if (r >= 1 && r <= top()) return d_[r];
    return IntMatrix(rank(r - 1), rank(r));
  }
  const IntMatrix& d(int r) const { return d_.at(r); }

  Z2 eta() const { return eta_; }
  SignedComplex with_eta(Z2 e) const {
    SignedComplex c = *this;
    c.eta_ = e;
    return c;
  }

  std::size_t total_rank() const {
    std::size_t s = 0;
    for (auto x : ranks_) s += x;
    return s;
  }

  friend bool operator==(const SignedComplex& a, const SignedComplex& b) {
    return a.ranks_ == b.ranks_ && a.d_ == b.d_ && a.eta_ == b.eta_;
  }
  friend bool operator!=(const SignedComplex& a, const SignedComplex& b) { return !(a == b); }

 private:
  std::vector<std::size_t> ranks_;
  std::vector<IntMatrix> d_;
  Z2 eta_;
};

inline long long euler_char(const SignedComplex& c) {
  long long s = 0;
  for (int r = 0; r <= c.top(); ++r) s += (r % 2 ? -1 : 1) * static_cast<long long>(c.rank(r));
  return s;
}

inline long long odd_rank(const SignedComplex& c) {
  long long s = 0;
  for (int r = 1; r <= c.top(); r += 2) s += c.rank(r);
  return s;
}

// extend with zero modules up to degree n
inline SignedComplex pad(const SignedComplex& c, int n) {
  if (n <= c.top()) return c;
  std::vector<std::size_t> ranks(c.ranks());
  ranks.resize(n + 1, 0);
  std::vector<IntMatrix> d;
  for (int r = 1; r <= n; ++r) d.push_back(r <= c.top() ? c.d(r) : IntMatrix(ranks[r - 1], 0));
  return SignedComplex(ranks, d, c.eta());
}

// drop zero modules above degree n
inline SignedComplex trim(const SignedComplex& c, int n) {
  if (c.top() <= n) return c;
  for (int r = n + 1; r <= c.top(); ++r)
    if (c.rank(r) != 0) throw ShapeMismatch("complex has a nonzero module above degree " + std::to_string(n));
  std::vector<std::size_t> ranks(c.ranks().begin(), c.ranks().begin() + n + 1);
  std::vector<IntMatrix> d;
  for (int r = 1; r <= n; ++r) d.push_back(c.d(r));
  return SignedComplex(ranks, d, c.eta());
}

inline Z2 epsilon(long long m, long long n) { return Z2::of(m * n); }

// sum over i > j of eps(a_{2i}, b_{2j}) - eps(a_{2i+1}, b_{2j+1}); entries are ranks or Euler characteristics
inline Z2 beta_of(const std::vector<long long>& a, const std::vector<long long>& b) {
  auto at = [](const std::vector<long long>& v, std::size_t r) { return r < v.size() ? v[r] : 0LL; };
  const std::size_t top = std::max(a.size(), b.size()) / 2 + 1;
  Z2 s;
  for (std::size_t i = 1; i <= top; ++i)
    for (std::size_t j = 0; j < i; ++j)
      s += epsilon(at(a, 2 * i), at(b, 2 * j)) + epsilon(at(a, 2 * i + 1), at(b, 2 * j + 1));
  return s;
}

inline std::vector<long long> rank_vector(const SignedComplex& c) {
  return std::vector<long long>(c.ranks().begin(), c.ranks().end());
}

inline Z2 beta(const SignedComplex& c, const SignedComplex& d) { return beta_of(rank_vector(c), rank_vector(d)); }

// eta_{C+D} = eta_C + eta_D - beta(C,D) + rank(C_odd) chi(D)
inline Z2 direct_sum_sign(const SignedComplex& c, const SignedComplex& d) {
  return c.eta() + d.eta() + beta(c, d) + epsilon(odd_rank(c), euler_char(d));
}

inline SignedComplex direct_sum(const SignedComplex& c, const SignedComplex& d) {
  const int n = std::max(c.top(), d.top());
  std::vector<std::size_t> ranks;
  std::vector<IntMatrix> diffs;
  for (int r = 0; r <= n; ++r) ranks.push_back(c.rank(r) + d.rank(r));
  for (int r = 1; r <= n; ++r) diffs.push_back(block_diag({c.diff(r), d.diff(r)}));
  return SignedComplex(ranks, diffs, direct_sum_sign(c, d));
}

// (SC)_r = C_{r-1}; eta_{SC} = -eta_C
inline SignedComplex suspension(const SignedComplex& c) {
  std::vector<std::size_t> ranks{0};
  for (int r = 0; r <= c.top(); ++r) ranks.push_back(c.rank(r));
  std::vector<IntMatrix> diffs{IntMatrix(0, c.rank(0))};
  for (int r = 1; r <= c.top(); ++r) diffs.push_back(c.d(r));
  return SignedComplex(ranks, diffs, c.eta());
}

// alpha_n(C) = sum over r = n+2, n+3 mod 4 of rank C^r
inline Z2 alpha_of(const std::vector<long long>& ranks, int n) {
  long long s = 0;
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    const long long m = (static_cast<long long>(r) - n) % 4;
    if (m == 2 || m == -2 || m == 3 || m == -1) s += ranks[r];
  }
  return Z2::of(s);
}

inline Z2 alpha_n(const SignedComplex& c, int n) { return alpha_of(rank_vector(c), n); }

// C^{n-*}: degree r is (C_{n-r})^*, differential (-1)^r d^T
inline SignedComplex dual_complex(const SignedComplex& c0, int n) {
  SignedComplex c = trim(c0, n);
  std::vector<std::size_t> ranks;
  for (int r = 0; r <= n; ++r) ranks.push_back(c.rank(n - r));
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= n; ++r) diffs.push_back(signed_by(r, c.diff(n - r + 1).transpose()));
  // eta_{C^{n-*}} = eta_C + beta(C,C) + alpha_n(C)
  return SignedComplex(ranks, diffs, c.eta() + beta(c, c) + alpha_n(c, n));
}

struct HomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1

  bool zero() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const HomologyGroup& a, const HomologyGroup& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
  }
};

inline std::vector<HomologyGroup> homology(const SignedComplex& c) {
  std::vector<std::vector<Integer>> inv(c.top() + 2);
  for (int r = 1; r <= c.top(); ++r) inv[r] = invariant_factors(c.d(r));
  std::vector<HomologyGroup> h(c.top() + 1);
  for (int r = 0; r <= c.top(); ++r) {
    const std::size_t rk_out = inv[r].size(), rk_in = (r + 1 <= c.top()) ? inv[r + 1].size() : 0;
    h[r].free_rank = c.rank(r) - rk_out - rk_in;
    if (r + 1 <= c.top())
      for (auto& x : inv[r + 1])
        if (x != 1) h[r].torsion.push_back(x);
  }
  return h;
}

inline std::vector<HomologyGroup> homology_ranks(const SignedComplex& c) { return homology(c); }

inline std::optional<int> first_homology_degree(const SignedComplex& c) {
  auto h = homology(c);
  for (int r = 0; r <= c.top(); ++r)
    if (!h[r].zero()) return r;
  return std::nullopt;
}

inline bool is_acyclic(const SignedComplex& c) { return !first_homology_degree(c); }

// degreewise matrices f_r : C_r -> D_r
class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(SignedComplex source, SignedComplex target, std::vector<IntMatrix> mats)
      : src_(std::move(source)), tgt_(std::move(target)), f_(std::move(mats)) {
    const int n = std::max(src_.top(), tgt_.top());
    f_.resize(n + 1);
    for (int r = 0; r <= n; ++r) {
      if (f_[r].rows() == 0 && f_[r].cols() == 0) f_[r] = IntMatrix(tgt_.rank(r), src_.rank(r));
      if (f_[r].rows() != tgt_.rank(r) || f_[r].cols() != src_.rank(r))
        throw ShapeMismatch("f_" + std::to_string(r) + " is " + f_[r].shape());
    }
    for (int r = 1; r <= n; ++r)
      if (tgt_.diff(r) * f_[r] != f_[r - 1] * src_.diff(r))
        throw NotAChainMap("d f != f d in degree " + std::to_string(r));
  }

  const SignedComplex& source() const { return src_; }
  const SignedComplex& target() const { return tgt_; }
  int top() const { return static_cast<int>(f_.size()) - 1; }
  IntMatrix at(int r) const {
    if (r >= 0 && r <= top()) return f_[r];
    return IntMatrix(tgt_.rank(r), src_.rank(r));
  }
  const std::vector<IntMatrix>& mats() const { return f_; }

  friend bool operator==(const ChainMap& a, const ChainMap& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.f_ == b.f_;
  }

 private:
  SignedComplex src_, tgt_;
  std::vector<IntMatrix> f_;
};

// g_r : C_r -> D_{r+1}
struct ChainHomotopy {
  std::vector<IntMatrix> mats;

  IntMatrix at(int r, std::size_t rows, std::size_t cols) const {
    if (r >= 0 && r < static_cast<int>(mats.size())) return mats[r];
    return IntMatrix(rows, cols);
  }
};

inline ChainMap identity_map(const SignedComplex& c) {
  std::vector<IntMatrix> m;
  for (int r = 0; r <= c.top(); ++r) m.push_back(IntMatrix::identity(c.rank(r)));
  return ChainMap(c, c, m);
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
  const int n = std::max({f.source().top(), f.target().top(), g.target().top()});
  std::vector<IntMatrix> m;
  for (int r = 0; r <= n; ++r) m.push_back(g.at(r) * f.at(r));
  return ChainMap(f.source(), g.target(), m);
}

inline ChainMap direct_sum(const ChainMap& f, const ChainMap& g) {
  auto src = direct_sum(f.source(), g.source());
  auto tgt = direct_sum(f.target(), g.target());
  const int n = std::max(src.top(), tgt.top());
  std::vector<IntMatrix> m;
  for (int r = 0; r <= n; ++r) m.push_back(block_diag({f.at(r), g.at(r)}));
  return ChainMap(src, tgt, m);
}

// C(f)_r = D_r + C_{r-1}, d = (d_D  (-1)^{r-1} f ; 0  d_C)
inline SignedComplex mapping_cone(const ChainMap& f) {
  const auto& c = f.source();
  const auto& d = f.target();
  const int n = std::max(d.top(), c.top() + 1);
  std::vector<std::size_t> ranks;
  for (int r = 0; r <= n; ++r) ranks.push_back(d.rank(r) + c.rank(r - 1));
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= n; ++r) {
    BlockBuilder b({d.rank(r - 1), c.rank(r - 2)}, {d.rank(r), c.rank(r - 1)});
    b.set(0, 0, d.diff(r));
    b.set(0, 1, signed_by(r - 1, f.at(r - 1)));
    b.set(1, 1, c.diff(r - 1));
    diffs.push_back(b.matrix());
  }
  // eta_{C(f)} = eta_{D + SC} = eta_D - eta_C - beta(D, SC) + eps(D_odd, chi(SC))
  return SignedComplex(ranks, diffs, direct_sum_sign(d, suspension(c)));
}

// g with f - f2 = d g + g d, by one integer system over all degrees
inline std::optional<ChainHomotopy> find_homotopy(const ChainMap& f, const ChainMap& f2) {
  const auto& c = f.source();
  const auto& d = f.target();
  if (c != f2.source() || d != f2.target()) throw ShapeMismatch("maps have different source or target");
  const int n = std::max(c.top(), d.top());
  // unknown g_r : C_r -> D_{r+1}, entries row-major
  std::vector<std::size_t> off(n + 2, 0);
  for (int r = 0; r <= n; ++r) off[r + 1] = off[r] + d.rank(r + 1) * c.rank(r);
  const std::size_t vars = off[n + 1];
  std::size_t eqs = 0;
  for (int r = 0; r <= n; ++r) eqs += d.rank(r) * c.rank(r);
  IntMatrix a(eqs, vars), b(eqs, 1);
  std::size_t row = 0;
  for (int r = 0; r <= n; ++r) {
    const IntMatrix diff = f.at(r) - f2.at(r);
    const IntMatrix dd = d.diff(r + 1), dc = c.diff(r);
    for (std::size_t i = 0; i < d.rank(r); ++i)
      for (std::size_t j = 0; j < c.rank(r); ++j, ++row) {
        b(row, 0) = diff(i, j);
        // (d_{r+1} g_r)_{ij} = sum_l dd(i,l) g_r(l,j)
        for (std::size_t l = 0; l < d.rank(r + 1); ++l)
          if (dd(i, l) != 0) a(row, off[r] + l * c.rank(r) + j) += dd(i, l);
        // (g_{r-1} d_r)_{ij} = sum_l g_{r-1}(i,l) dc(l,j)
        if (r >= 1)
          for (std::size_t l = 0; l < c.rank(r - 1); ++l)
            if (dc(l, j) != 0) a(row, off[r - 1] + i * c.rank(r - 1) + l) += dc(l, j);
      }
  }
  std::optional<IntMatrix> x;
  if (vars == 0) {
    if (!b.is_zero()) return std::nullopt;
    x = IntMatrix(0, 1);
  } else {
    x = try_solve_integral(a, b);
    if (!x) return std::nullopt;
  }
  ChainHomotopy g;
  for (int r = 0; r <= n; ++r) {
    IntMatrix m(d.rank(r + 1), c.rank(r));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = (*x)(off[r] + i * m.cols() + j, 0);
    g.mats.push_back(m);
  }
  return g;
}

// check f - f2 = d g + g d
inline bool is_homotopy(const ChainMap& f, const ChainMap& f2, const ChainHomotopy& g) {
  const auto& c = f.source();
  const auto& d = f.target();
  const int n = std::max(c.top(), d.top());
  for (int r = 0; r <= n; ++r) {
    IntMatrix lhs = d.diff(r + 1) * g.at(r, d.rank(r + 1), c.rank(r));
    if (r >= 1) lhs += g.at(r - 1, d.rank(r), c.rank(r - 1)) * c.diff(r);
    if (lhs != f.at(r) - f2.at(r)) return false;
  }
  return true;
}

}  // namespace tl
