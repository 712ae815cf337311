#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "poincare.hpp"

namespace tl {

// mt19937_64 seeded from (seed, trial); bounded draws by rejection so results do not depend on the
// standard library's distribution implementations
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    g_.seed(seq);
  }

  std::uint64_t bits() { return g_(); }

  // uniform in [a, b]
  long long uniform(long long a, long long b) {
    if (b <= a) return a;
    const std::uint64_t span = static_cast<std::uint64_t>(b - a) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = g_();
    while (x >= limit);
    return a + static_cast<long long>(x % span);
  }
  int sign() { return uniform(0, 1) ? -1 : 1; }
  bool chance(int percent) { return uniform(0, 99) < percent; }
  Z2 bit() { return Z2(static_cast<int>(uniform(0, 1))); }

 private:
  std::mt19937_64 g_;
};

struct Unimodular {
  IntMatrix p;
  Z2 det;  // 1 when det p = -1
};

// product of elementary operations with the determinant sign tracked
inline Unimodular random_unimodular(Rng& rng, std::size_t n, int steps = 8) {
  Unimodular u{IntMatrix::identity(n), 0};
  if (n == 0) return u;
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = rng.uniform(0, n - 1), j = rng.uniform(0, n - 1);
    if (i != j && rng.chance(80)) {
      const long long q = rng.sign() * rng.uniform(1, 2);
      u.p.sub_row(i, j, Integer(q));
    } else if (i != j && rng.chance(50)) {
      u.p.swap_rows(i, j);
      u.det += 1;
    } else {
      u.p.negate_row(i);
      u.det += 1;
    }
  }
  return u;
}

inline IntMatrix hyperbolic() { return IntMatrix{{0, 1}, {1, 0}}; }

inline IntMatrix e8() {
  // Cartan matrix of E8
  IntMatrix m(8, 8);
  for (std::size_t i = 0; i < 8; ++i) m(i, i) = 2;
  auto edge = [&](std::size_t a, std::size_t b) { m(a, b) = m(b, a) = -1; };
  for (std::size_t i = 0; i + 1 < 7; ++i) edge(i, i + 1);
  edge(4, 7);
  return m;
}

// G^T D G with D a block sum of <+-1> and H
inline IntMatrix random_form(Rng& rng, std::size_t max_rank) {
  const std::size_t m = rng.uniform(1, std::max<std::size_t>(1, max_rank));
  std::vector<IntMatrix> blocks;
  std::size_t have = 0;
  while (have < m) {
    if (m - have >= 2 && rng.chance(30)) {
      blocks.push_back(hyperbolic());
      have += 2;
    } else {
      blocks.push_back(IntMatrix{{rng.sign()}});
      ++have;
    }
  }
  const IntMatrix d = block_diag(blocks);
  const IntMatrix g = random_unimodular(rng, d.rows(), 6).p;
  return g.transpose() * d * g;
}

// sums of H, E8 and -E8, conjugated
inline IntMatrix random_even_form(Rng& rng, int max_blocks) {
  std::vector<IntMatrix> blocks;
  const int n = static_cast<int>(rng.uniform(1, std::max(1, max_blocks)));
  for (int i = 0; i < n; ++i) {
    const long long t = rng.uniform(0, 2);
    if (t == 0) blocks.push_back(hyperbolic());
    else blocks.push_back(t == 1 ? e8() : -e8());
  }
  const IntMatrix d = block_diag(blocks);
  const IntMatrix g = random_unimodular(rng, d.rows(), 10).p;
  return g.transpose() * d * g;
}

// new basis P_r in every degree: d_r <- P_{r-1} d_r P_r^{-1}
inline SignedComplex conjugate(const SignedComplex& c, const std::vector<IntMatrix>& p) {
  std::vector<IntMatrix> d;
  for (int r = 1; r <= c.top(); ++r) d.push_back(p.at(r - 1) * c.d(r) * inverse_unimodular(p.at(r)));
  return SignedComplex(c.ranks(), d, c.eta());
}

// Z in degree r -> Z in degree r-1 by u, inside degrees 0..n
inline SignedComplex elementary(int n, int r, long long u, Z2 eta = 0) {
  std::vector<std::size_t> ranks(n + 1, 0);
  ranks[r] = 1;
  ranks[r - 1] += 1;
  std::vector<IntMatrix> d;
  for (int q = 1; q <= n; ++q) d.emplace_back(ranks[q - 1], ranks[q]);
  d[r - 1] = IntMatrix{{u}};
  return SignedComplex(ranks, d, eta);
}

// contractible complex with ground-truth torsion tracked through its construction
struct TrackedComplex {
  SignedComplex complex;
  Z2 expected;
};

inline TrackedComplex random_contractible(Rng& rng, int max_degree, int max_atoms) {
  const int n = static_cast<int>(rng.uniform(1, std::max(1, max_degree)));
  const int atoms = static_cast<int>(rng.uniform(1, std::max(1, max_atoms)));
  std::vector<std::size_t> ranks(n + 1, 0);
  struct Atom { int r; long long u; std::size_t hi, lo; };
  std::vector<Atom> as;
  for (int i = 0; i < atoms; ++i) {
    const int r = static_cast<int>(rng.uniform(1, n));
    as.push_back({r, rng.sign(), ranks[r]++, ranks[r - 1]++});
  }
  std::vector<IntMatrix> d;
  for (int q = 1; q <= n; ++q) d.emplace_back(ranks[q - 1], ranks[q]);
  for (auto& a : as) d[a.r - 1](a.lo, a.hi) = a.u;
  // d + gamma is a signed permutation from the odd basis onto the even basis
  std::vector<std::size_t> odd_off(n + 2, 0), even_off(n + 2, 0);
  std::size_t oo = 0, eo = 0;
  for (int q = 0; q <= n; ++q) {
    if (q % 2) { odd_off[q] = oo; oo += ranks[q]; }
    else { even_off[q] = eo; eo += ranks[q]; }
  }
  std::vector<std::size_t> perm(oo);
  Z2 expected;
  for (auto& a : as) {
    const int odd = a.r % 2 ? a.r : a.r - 1, even = a.r % 2 ? a.r - 1 : a.r;
    const std::size_t oi = odd_off[odd] + (odd == a.r ? a.hi : a.lo);
    const std::size_t ei = even_off[even] + (even == a.r ? a.hi : a.lo);
    perm[oi] = ei;
    if (a.u < 0) expected += 1;
  }
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) expected += 1;
  const Z2 eta = rng.bit();
  expected += eta;
  std::vector<IntMatrix> p;
  for (int q = 0; q <= n; ++q) {
    auto u = random_unimodular(rng, ranks[q], 6);
    p.push_back(u.p);
    expected += u.det;
  }
  return {conjugate(SignedComplex(ranks, d, eta), p), expected};
}

// sum of free atoms and elementary atoms (units or not), conjugated; homology is arbitrary
inline SignedComplex random_complex(Rng& rng, int max_degree, int max_atoms) {
  const int n = static_cast<int>(rng.uniform(0, std::max(0, max_degree)));
  const int atoms = static_cast<int>(rng.uniform(1, std::max(1, max_atoms)));
  std::vector<std::size_t> ranks(n + 1, 0);
  struct Atom { int r; long long u; std::size_t hi, lo; };
  std::vector<Atom> as;
  for (int i = 0; i < atoms; ++i) {
    const int r = static_cast<int>(rng.uniform(0, n));
    if (r == 0 || rng.chance(40)) {
      ranks[r]++;
      continue;
    }
    const long long u = rng.chance(75) ? rng.sign() : rng.sign() * rng.uniform(2, 3);
    as.push_back({r, u, ranks[r]++, ranks[r - 1]++});
  }
  std::vector<IntMatrix> d;
  for (int q = 1; q <= n; ++q) d.emplace_back(ranks[q - 1], ranks[q]);
  for (auto& a : as) d[a.r - 1](a.lo, a.hi) = a.u;
  std::vector<IntMatrix> p;
  for (int q = 0; q <= n; ++q) p.push_back(random_unimodular(rng, ranks[q], 6).p);
  return conjugate(SignedComplex(ranks, d, rng.bit()), p);
}

// chain equivalence C -> D: inclusion into C + E (E contractible) twisted by a null-homotopic map,
// then a random change of basis of the target
inline ChainMap random_equivalence(Rng& rng, const SignedComplex& c, int max_atoms) {
  const int n = std::max(c.top(), 1);
  SignedComplex e = random_contractible(rng, n, max_atoms).complex;
  e = pad(e, c.top());
  const SignedComplex s = direct_sum(c, e);
  // k = d_E h + h d_C for small random h : C_r -> E_{r+1}
  std::vector<IntMatrix> h;
  for (int r = 0; r <= s.top(); ++r) {
    IntMatrix m(e.rank(r + 1), c.rank(r));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-1, 1);
    h.push_back(m);
  }
  std::vector<IntMatrix> inc, p;
  for (int r = 0; r <= s.top(); ++r) {
    IntMatrix k = e.diff(r + 1) * h[r];
    if (r >= 1) k += h[r - 1] * c.diff(r);
    BlockBuilder b({c.rank(r), e.rank(r)}, {c.rank(r)});
    b.set(0, 0, IntMatrix::identity(c.rank(r)));
    b.set(1, 0, k);
    inc.push_back(b.matrix());
    p.push_back(random_unimodular(rng, s.rank(r), 6).p);
  }
  const SignedComplex t = conjugate(s, p).with_eta(rng.bit());
  std::vector<IntMatrix> m;
  for (int r = 0; r <= s.top(); ++r) m.push_back(p[r] * inc[r]);
  return ChainMap(c, t, m);
}

// f + d g + g d for a small random g
inline ChainMap random_homotopic(Rng& rng, const ChainMap& f) {
  const auto& c = f.source();
  const auto& d = f.target();
  const int n = std::max(c.top(), d.top());
  ChainHomotopy g;
  for (int r = 0; r <= n; ++r) {
    IntMatrix m(d.rank(r + 1), c.rank(r));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.chance(30) ? rng.uniform(-2, 2) : 0;
    g.mats.push_back(m);
  }
  std::vector<IntMatrix> out;
  for (int r = 0; r <= n; ++r) {
    IntMatrix x = f.at(r) + d.diff(r + 1) * g.at(r, d.rank(r + 1), c.rank(r));
    if (r >= 1) x += g.at(r - 1, d.rank(r), c.rank(r - 1)) * c.diff(r);
    out.push_back(x);
  }
  return ChainMap(c, d, out);
}

// basis changes P_r as a chain isomorphism C -> C', with the recorded torsion sum det-sign(P_r) + eta_C + eta_C'
struct TrackedMap {
  ChainMap map;
  Z2 expected;
};

inline TrackedMap random_isomorphism(Rng& rng, const SignedComplex& c) {
  std::vector<IntMatrix> p;
  Z2 expected = c.eta();
  for (int r = 0; r <= c.top(); ++r) {
    auto u = random_unimodular(rng, c.rank(r), 6);
    p.push_back(u.p);
    expected += u.det;
  }
  const Z2 eta = rng.bit();
  expected += eta;
  return {ChainMap(c, conjugate(c, p).with_eta(eta), p), expected};
}

// random symmetric Poincare complex from a form, optionally padded and rebased
inline SymmetricComplex random_symmetric(Rng& rng, std::size_t max_rank, int max_k) {
  const int k = static_cast<int>(rng.uniform(0, std::max(0, max_k)));
  SymmetricComplex x = form_to_complex(UnimodularForm(random_form(rng, max_rank)), k);
  const int n = 4 * k;
  if (n > 0 && rng.chance(60)) {
    const int pads = static_cast<int>(rng.uniform(1, 2));
    for (int i = 0; i < pads; ++i) {
      const int r = static_cast<int>(rng.uniform(1, n));
      std::vector<IntMatrix> p;
      SignedComplex el = elementary(n, r, rng.sign(), rng.bit());
      for (int q = 0; q <= n; ++q) p.push_back(random_unimodular(rng, el.rank(q), 4).p);
      x = direct_sum(x, padding(conjugate(el, p), n));
    }
  }
  if (rng.chance(70)) {
    const int changes = static_cast<int>(rng.uniform(1, 3));
    for (int i = 0; i < changes; ++i) {
      const int q = static_cast<int>(rng.uniform(0, n));
      if (x.complex().rank(q)) x = basis_change(x, q, random_unimodular(rng, x.complex().rank(q), 6).p);
    }
  }
  if (rng.chance(50)) x = flip_eta(x);
  return x;
}

// ---- filtered generators ----

// block upper triangular unimodular matrices in every degree
inline std::vector<IntMatrix> random_filtered_automorphism(Rng& rng, const FilteredComplex& f, Z2* det = nullptr) {
  std::vector<IntMatrix> out;
  for (int r = 0; r <= f.top(); ++r) {
    std::vector<std::size_t> sizes;
    for (int s = 0; s <= f.k(); ++s) sizes.push_back(f.rank(r, s));
    BlockBuilder b(sizes, sizes);
    for (int a = 0; a <= f.k(); ++a) {
      auto u = random_unimodular(rng, sizes[a], 4);
      b.set(a, a, u.p);
      if (det) *det += u.det;
      for (int c = a + 1; c <= f.k(); ++c)
        if (sizes[a] && sizes[c] && rng.chance(50)) {
          IntMatrix m(sizes[a], sizes[c]);
          for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-1, 1);
          b.set(a, c, m);
        }
    }
    out.push_back(b.matrix());
  }
  return out;
}

inline FilteredComplex random_signs(Rng& rng, const FilteredComplex& f) {
  std::vector<Z2> s;
  for (int p = 0; p <= f.k(); ++p) s.push_back(rng.bit());
  return f.with_signs(s, rng.bit());
}

namespace detail {

struct FilteredAtom {
  int r, s, j;  // j < 0 for a free generator at (r, s)
  long long u;
};

inline FilteredComplex assemble_atoms(int n, int k, const std::vector<FilteredAtom>& atoms) {
  std::vector<std::vector<std::size_t>> ranks(n + 1, std::vector<std::size_t>(k + 1, 0));
  struct Placed { const FilteredAtom* a; std::size_t hi, lo; };
  std::vector<Placed> placed;
  for (auto& a : atoms) {
    if (a.j < 0) {
      ranks[a.r][a.s]++;
      continue;
    }
    const std::size_t hi = ranks[a.r][a.s]++;
    const std::size_t lo = ranks[a.r - 1][a.s - a.j]++;
    placed.push_back({&a, hi, lo});
  }
  std::vector<IntMatrix> diffs;
  std::vector<std::vector<std::size_t>> off(n + 1, std::vector<std::size_t>(k + 2, 0));
  for (int r = 0; r <= n; ++r)
    for (int s = 0; s <= k; ++s) off[r][s + 1] = off[r][s] + ranks[r][s];
  for (int r = 1; r <= n; ++r) diffs.emplace_back(off[r - 1][k + 1], off[r][k + 1]);
  for (auto& p : placed) diffs[p.a->r - 1](off[p.a->r - 1][p.a->s - p.a->j] + p.lo, off[p.a->r][p.a->s] + p.hi) = p.a->u;
  return FilteredComplex(ranks, diffs, std::vector<Z2>(k + 1), 0);
}

}  // namespace detail

// filtered complex assembled from atoms and rebased by a filtered automorphism; contractible
// means every atom is a unit that lowers filtration by at most one (so the graded object contracts)
inline FilteredComplex random_filtered(Rng& rng, int k, int max_degree, int max_atoms, bool contractible) {
  const int n = std::max(static_cast<int>(rng.uniform(contractible ? 1 : 0, std::max(1, max_degree))), k);
  std::vector<detail::FilteredAtom> atoms;
  const int count = static_cast<int>(rng.uniform(1, std::max(1, max_atoms)));
  for (int i = 0; i < count; ++i) {
    const int r = static_cast<int>(rng.uniform(contractible ? 1 : 0, n));
    const int s = static_cast<int>(rng.uniform(0, std::min(k, r)));
    if (!contractible && (r == 0 || rng.chance(35))) {
      atoms.push_back({r, s, -1, 0});
      continue;
    }
    int j = static_cast<int>(rng.uniform(0, std::min(contractible ? 1 : 2, s)));
    if (r - 1 < s - j) j = s - r + 1;
    if (j > s || j < 0 || (contractible && j > 1)) {
      if (!contractible) atoms.push_back({r, s, -1, 0});
      continue;
    }
    const long long u = (contractible || rng.chance(70)) ? rng.sign() : rng.sign() * rng.uniform(2, 3);
    atoms.push_back({r, s, j, u});
  }
  FilteredComplex f = detail::assemble_atoms(n, k, atoms);
  std::vector<IntMatrix> p = random_filtered_automorphism(rng, f);
  return random_signs(rng, filtered_basis_change(f, p, f.piece_signs(), f.ambient()).target());
}

// n-admissible: internal degrees in 0..n and every graded piece has self-dual homology
inline FilteredComplex random_admissible(Rng& rng, int n, int k, int max_atoms) {
  std::vector<detail::FilteredAtom> atoms;
  const int count = static_cast<int>(rng.uniform(1, std::max(1, max_atoms)));
  auto add_free = [&](int s, int t) {
    atoms.push_back({s + t, s, -1, 0});
    if (n - t != t) atoms.push_back({s + n - t, s, -1, 0});
  };
  for (int i = 0; i < count; ++i) {
    const int s = static_cast<int>(rng.uniform(0, k));
    const long long kind = rng.uniform(0, 3);
    if (kind == 0 || n == 0) {
      add_free(s, static_cast<int>(rng.uniform(0, n)));
    } else if (kind == 1) {
      // internal atom t+1 -> t, paired with n-t -> n-t-1 when it carries torsion
      const int t = static_cast<int>(rng.uniform(0, n - 1));
      const long long u = rng.chance(70) ? rng.sign() : rng.sign() * 2;
      atoms.push_back({s + t + 1, s, 0, u});
      if (u * u != 1 && n - t - 1 != t) atoms.push_back({s + n - t, s, 0, u});
    } else if (s >= 1) {
      // crossing atom (s+t, s) -> (s+t-1, s-1), paired at internal degree n - t
      const int t = static_cast<int>(rng.uniform(0, n));
      atoms.push_back({s + t, s, 1, rng.sign()});
      if (n - t != t) atoms.push_back({s + n - t, s, 1, rng.sign()});
    } else {
      add_free(s, static_cast<int>(rng.uniform(0, n)));
    }
  }
  FilteredComplex f = detail::assemble_atoms(n + k, k, atoms);
  std::vector<IntMatrix> p = random_filtered_automorphism(rng, f);
  return random_signs(rng, filtered_basis_change(f, p, f.piece_signs(), f.ambient()).target());
}

}  // namespace tl
