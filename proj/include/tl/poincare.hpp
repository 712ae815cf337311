#pragma once

#include <vector>

#include "filtered.hpp"

namespace tl {

// symmetric Poincare complex (C, phi_0) of formal dimension n; only phi_0 is kept
class SymmetricComplex {
 public:
  SymmetricComplex() = default;

  SymmetricComplex(const SignedComplex& c, int n, std::vector<IntMatrix> phi0) : n_(n) {
    if (n < 0) throw ShapeMismatch("negative formal dimension");
    SignedComplex cc = fit(c, n);
    phi_ = ChainMap(dual_complex(cc, n), cc, std::move(phi0));
    if (!is_acyclic(mapping_cone(phi_))) throw NotEquivalence("phi_0 is not a chain equivalence");
    if (n % 2 && euler_char(cc) != 0) throw NotEquivalence("odd dimension with nonzero Euler characteristic");
  }

  const SignedComplex& complex() const { return phi_.target(); }
  int n() const { return n_; }
  const ChainMap& phi0() const { return phi_; }

  friend bool operator==(const SymmetricComplex& a, const SymmetricComplex& b) {
    return a.n_ == b.n_ && a.complex() == b.complex() && a.phi_.mats() == b.phi_.mats();
  }

 private:
  int n_ = 0;
  ChainMap phi_;
};

class UnimodularForm {
 public:
  UnimodularForm() = default;
  explicit UnimodularForm(IntMatrix h) : h_(std::move(h)) {
    if (!h_.square() || h_ != h_.transpose()) throw NotSymmetric("form matrix is not symmetric");
    Integer d = det(h_);
    if (d != 1 && d != -1) throw NotUnimodular("determinant " + d.str());
  }
  const IntMatrix& matrix() const { return h_; }
  std::size_t rank() const { return h_.rows(); }

 private:
  IntMatrix h_;
};

// Z^rank in degree 2k, n = 4k, phi_0 = h
inline SymmetricComplex form_to_complex(const UnimodularForm& h, int k) {
  std::vector<std::size_t> ranks(4 * k + 1, 0);
  ranks[2 * k] = h.rank();
  std::vector<IntMatrix> phi(4 * k + 1);
  phi[2 * k] = h.matrix();
  return SymmetricComplex(SignedComplex::free(ranks), 4 * k, phi);
}

// tau^NEW(phi_0 : C^{n-*} -> C), checked against the degreewise formula when phi_0 is an isomorphism
inline Z2 tau_new_symmetric(const SymmetricComplex& x) {
  const Z2 t = tau_new_map(x.phi0());
  bool iso = true;
  for (int r = 0; r <= x.n() && iso; ++r) {
    const IntMatrix m = x.phi0().at(r);
    iso = m.square() && (m.rows() == 0 || abs(det(m)) == 1);
  }
  if (iso && tau_iso(x.phi0()) != t) throw RouteMismatch("isomorphism formula disagrees with the cone");
  return t;
}

inline SymmetricComplex negate(const SymmetricComplex& x) {
  std::vector<IntMatrix> m;
  for (auto& a : x.phi0().mats()) m.push_back(-a);
  return SymmetricComplex(x.complex(), x.n(), m);
}

inline SymmetricComplex flip_eta(const SymmetricComplex& x) {
  return SymmetricComplex(x.complex().with_eta(x.complex().eta() + 1), x.n(), x.phi0().mats());
}

inline SymmetricComplex direct_sum(const SymmetricComplex& x, const SymmetricComplex& y) {
  if (x.n() != y.n()) throw ShapeMismatch("formal dimensions differ");
  std::vector<IntMatrix> m;
  for (int r = 0; r <= x.n(); ++r) m.push_back(block_diag({x.phi0().at(r), y.phi0().at(r)}));
  return SymmetricComplex(direct_sum(x.complex(), y.complex()), x.n(), m);
}

// P + P^{n-*} with phi_0 mapping the dual of P identically onto the second summand; P must be acyclic
inline SymmetricComplex padding(const SignedComplex& p0, int n) {
  const SignedComplex p = fit(p0, n);
  if (!is_acyclic(p)) throw NotAcyclic("padding needs an acyclic complex");
  const SignedComplex pd = dual_complex(p, n);
  const SignedComplex pdd = dual_complex(pd, n);
  std::vector<IntMatrix> m;
  for (int q = 0; q <= n; ++q) {
    BlockBuilder b({p.rank(q), pd.rank(q)}, {pd.rank(q), pdd.rank(q)});
    b.set(1, 0, IntMatrix::identity(pd.rank(q)));
    m.push_back(b.matrix());
  }
  return SymmetricComplex(direct_sum(p, pd), n, m);
}

// new basis P in degree q: d_q <- d_q P^{-1}, d_{q+1} <- P d_{q+1}, phi_q <- P phi_q, phi_{n-q} <- phi_{n-q} P^T
inline SymmetricComplex basis_change(const SymmetricComplex& x, int q, const IntMatrix& p) {
  const SignedComplex& c = x.complex();
  if (p.rows() != c.rank(q) || !p.square()) throw ShapeMismatch("basis change in degree " + std::to_string(q) + " is " + p.shape());
  const IntMatrix pinv = inverse_unimodular(p);
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= c.top(); ++r) {
    IntMatrix d = c.d(r);
    if (r == q) d = d * pinv;
    if (r - 1 == q) d = p * d;
    diffs.push_back(d);
  }
  std::vector<IntMatrix> m;
  for (int r = 0; r <= x.n(); ++r) {
    IntMatrix a = x.phi0().at(r);
    if (r == q) a = p * a;
    if (x.n() - r == q) a = a * p.transpose();
    m.push_back(a);
  }
  return SymmetricComplex(SignedComplex(c.ranks(), diffs, c.eta()), x.n(), m);
}

// index of the middle cohomology pairing <z, phi_0 z'>; zero unless n = 0 mod 4
inline long long signature(const SymmetricComplex& x) {
  if (x.n() % 4) return 0;
  const int m = x.n() / 2;
  const SignedComplex dual = x.phi0().source();
  const IntMatrix z = kernel_basis(dual.diff(m));
  const IntMatrix bd = dual.diff(m + 1);
  // cocycles independent modulo coboundaries over Q
  IntMatrix chosen = bd;
  std::size_t base = rank_q(to_rational(bd));
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < z.cols(); ++j) {
    IntMatrix trial = hstack(chosen, z.block(0, j, z.rows(), 1));
    std::size_t rk = rank_q(to_rational(trial));
    if (rk > base) {
      chosen = trial;
      base = rk;
      keep.push_back(j);
    }
  }
  IntMatrix basis(z.rows(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) basis.set_block(0, i, z.block(0, keep[i], z.rows(), 1));
  const IntMatrix b = basis.transpose() * x.phi0().at(m) * basis;
  if (b != b.transpose()) throw NonSymmetricHomologyPairing("middle pairing is not symmetric");
  return inertia(to_rational(b)).signature();
}

inline long long signature(const UnimodularForm& h) { return inertia(to_rational(h.matrix())).signature(); }

inline long long mod(long long a, long long m) { return ((a % m) + m) % m; }

struct CongruenceReport {
  long long lhs = 0, rhs = 0, modulus = 1;
  bool holds() const { return mod(lhs - rhs, modulus) == 0; }
};

// sign(C) = 2 tau^NEW + (2k+1) chi mod 4 for n = 4k
inline CongruenceReport check_signmod4(const SymmetricComplex& x) {
  if (x.n() % 4) throw DimensionNotDivisibleBy4("formal dimension " + std::to_string(x.n()));
  const long long k = x.n() / 4;
  const long long lhs = mod(signature(x), 4);
  const long long rhs = mod(2 * tau_new_symmetric(x).bit + (2 * k + 1) * euler_char(x.complex()), 4);
  return {lhs, rhs, 4};
}

// sign = rank + det - 1 mod 4
inline CongruenceReport check_det_mod4(const UnimodularForm& h) {
  const long long d = det(h.matrix()) == 1 ? 1 : -1;
  return {mod(signature(h), 4), mod(static_cast<long long>(h.rank()) + d - 1, 4), 4};
}

inline bool is_even(const UnimodularForm& h) {
  for (std::size_t i = 0; i < h.rank(); ++i)
    if (h.matrix()(i, i) % 2 != 0) return false;
  return true;
}

inline CongruenceReport check_mod8_even(const UnimodularForm& h) {
  if (!is_even(h)) throw NotEven("form has an odd diagonal entry");
  return {mod(signature(h), 8), 0, 8};
}

// phi_0 = (1 (x) phi^D)(phi^C (x) 1) theta on C (x) D
inline SymmetricComplex tensor_symmetric(const SymmetricComplex& x, const SymmetricComplex& y) {
  const SignedComplex &c = x.complex(), &d = y.complex();
  const SignedComplex cd = x.phi0().source(), dd = y.phi0().source();
  const FilteredComplex f = tensor_filtered(c, d);
  const ChainMap theta = theta_map(f, y.n());
  const SignedComplex t_dd = total_complex(tensor_filtered(cd, dd));
  const SignedComplex t_cdd = total_complex(tensor_filtered(c, dd));
  const SignedComplex t_cd = total_complex(f);
  const ChainMap a(t_dd, t_cdd, tensor_map_mats(x.phi0(), identity_map(dd)));
  const ChainMap b(t_cdd, t_cd, tensor_map_mats(identity_map(c), y.phi0()));
  const ChainMap phi = compose(b, compose(a, theta));
  return SymmetricComplex(t_cd, x.n() + y.n(), phi.mats());
}

inline bool is_round(const SymmetricComplex& x) { return euler_char(x.complex()) == 0; }
inline bool is_simple(const SymmetricComplex& x) { return tau_new_symmetric(x) == 0; }

}  // namespace tl
