#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "torsion.hpp"

namespace tl {

// k-filtered complex: blocks C_{r,s} (0 <= s <= k, s <= r), total differential upper triangular in s.
// Components d_j : C_{r,s} -> C_{r-1,s-j}. The piece G_s has C_{s+t,s} in internal degree t.
class FilteredComplex {
 public:
  using Components = std::map<std::tuple<int, int, int>, IntMatrix>;  // (r, s, j) -> d_j on C_{r,s}

  FilteredComplex() : ranks_{{0}}, piece_eta_{Z2()} {}

  FilteredComplex(std::vector<std::vector<std::size_t>> ranks, std::vector<IntMatrix> total_diffs,
                  std::vector<Z2> piece_signs, Z2 ambient)
      : ranks_(std::move(ranks)), piece_eta_(std::move(piece_signs)), ambient_(ambient) {
    if (ranks_.empty() || ranks_[0].empty()) throw ShapeMismatch("filtered complex needs at least one block");
    const std::size_t width = ranks_[0].size();
    for (auto& row : ranks_)
      if (row.size() != width) throw ShapeMismatch("ragged block ranks");
    if (piece_eta_.size() != width) throw ShapeMismatch("need one sign per graded piece");
    for (int r = 0; r <= top(); ++r) {
      offsets_.emplace_back(width + 1, 0);
      for (std::size_t s = 0; s < width; ++s) {
        if (static_cast<int>(s) > r && ranks_[r][s] != 0)
          throw NotFiltered("block (" + std::to_string(r) + "," + std::to_string(s) + ") has negative internal degree");
        offsets_[r][s + 1] = offsets_[r][s] + ranks_[r][s];
      }
    }
    std::vector<std::size_t> tot;
    for (int r = 0; r <= top(); ++r) tot.push_back(total_rank(r));
    total_ = SignedComplex(tot, std::move(total_diffs));
    for (int r = 1; r <= top(); ++r)
      for (int a = 0; a <= k(); ++a)
        for (int b = a + 1; b <= k(); ++b)
          if (!component(r, a, b).is_zero())
            throw NotFiltered("d_" + std::to_string(r) + " raises filtration " + std::to_string(a) + " -> " + std::to_string(b));
  }

  static FilteredComplex from_components(std::vector<std::vector<std::size_t>> ranks, const Components& comps,
                                         std::vector<Z2> piece_signs, Z2 ambient) {
    const int n = static_cast<int>(ranks.size()) - 1;
    const int k = ranks.empty() ? -1 : static_cast<int>(ranks[0].size()) - 1;
    std::vector<IntMatrix> diffs;
    for (int r = 1; r <= n; ++r) {
      BlockBuilder b(ranks[r - 1], ranks[r]);
      for (auto& [key, m] : comps) {
        auto [rr, s, j] = key;
        if (rr != r) continue;
        if (s < 0 || s > k || j < 0 || s - j < 0) throw NotFiltered("component index out of range");
        b.set(s - j, s, m);
      }
      diffs.push_back(b.matrix());
    }
    for (auto& [key, m] : comps)
      if (std::get<0>(key) < 1 || std::get<0>(key) > n) throw ShapeMismatch("component degree out of range");
    return FilteredComplex(std::move(ranks), std::move(diffs), std::move(piece_signs), ambient);
  }

  int k() const { return static_cast<int>(ranks_[0].size()) - 1; }
  int top() const { return static_cast<int>(ranks_.size()) - 1; }
  std::size_t rank(int r, int s) const {
    if (r < 0 || r > top() || s < 0 || s > k()) return 0;
    return ranks_[r][s];
  }
  std::size_t offset(int r, int s) const {
    if (r < 0 || r > top() || s < 0 || s > k() + 1) return 0;
    return offsets_[r][s];
  }
  std::size_t total_rank(int r) const {
    std::size_t x = 0;
    for (int s = 0; s <= k(); ++s) x += rank(r, s);
    return x;
  }
  const std::vector<std::vector<std::size_t>>& ranks() const { return ranks_; }

  // block of d_r from C_{r,from} to C_{r-1,to}
  IntMatrix component(int r, int from, int to) const {
    if (r < 1 || r > top() || from < 0 || from > k() || to < 0 || to > k()) return IntMatrix(rank(r - 1, to), rank(r, from));
    return total_.d(r).block(offset(r - 1, to), offset(r, from), rank(r - 1, to), rank(r, from));
  }
  const IntMatrix& total_diff(int r) const { return total_.d(r); }
  IntMatrix diff(int r) const { return total_.diff(r); }
  const SignedComplex& unsigned_total() const { return total_; }

  Z2 piece_sign(int s) const { return piece_eta_.at(s); }
  const std::vector<Z2>& piece_signs() const { return piece_eta_; }
  Z2 ambient() const { return ambient_; }
  FilteredComplex with_signs(std::vector<Z2> piece_signs, Z2 ambient) const {
    FilteredComplex f = *this;
    if (piece_signs.size() != piece_eta_.size()) throw ShapeMismatch("need one sign per graded piece");
    f.piece_eta_ = std::move(piece_signs);
    f.ambient_ = ambient;
    return f;
  }

  friend bool operator==(const FilteredComplex& a, const FilteredComplex& b) {
    return a.ranks_ == b.ranks_ && a.total_ == b.total_ && a.piece_eta_ == b.piece_eta_ && a.ambient_ == b.ambient_;
  }

 private:
  std::vector<std::vector<std::size_t>> ranks_;
  std::vector<std::vector<std::size_t>> offsets_;
  SignedComplex total_;
  std::vector<Z2> piece_eta_;
  Z2 ambient_;
};

inline SignedComplex piece(const FilteredComplex& f, int p) {
  const int top = f.top() - p;
  if (top < 0) return SignedComplex::free({0}, f.piece_sign(p));
  std::vector<std::size_t> ranks;
  std::vector<IntMatrix> diffs;
  for (int t = 0; t <= top; ++t) ranks.push_back(f.rank(p + t, p));
  for (int t = 1; t <= top; ++t) diffs.push_back(f.component(p + t, p, p));
  return SignedComplex(ranks, diffs, f.piece_sign(p));
}

// d_* = (-1)^t d_1 : G_p -> G_{p-1}
inline ChainMap derived_map(const FilteredComplex& f, int p) {
  SignedComplex src = piece(f, p), tgt = piece(f, p - 1);
  std::vector<IntMatrix> m;
  for (int t = 0; t <= std::max(src.top(), tgt.top()); ++t) m.push_back(signed_by(t, f.component(p + t, p, p - 1)));
  return ChainMap(src, tgt, m);
}

inline std::vector<long long> piece_chis(const std::vector<SignedComplex>& pieces) {
  std::vector<long long> out;
  for (auto& g : pieces) out.push_back(euler_char(g));
  return out;
}

// eta of G_0 + S(G_1 + S(G_2 + ... + S G_m))
inline Z2 iterated_cone_sign(const std::vector<SignedComplex>& pieces) {
  if (pieces.empty()) return 0;
  SignedComplex x = pieces.back();
  for (auto it = pieces.rbegin() + 1; it != pieces.rend(); ++it) x = direct_sum(*it, suspension(x));
  return x.eta();
}

inline std::vector<SignedComplex> pieces_of(const FilteredComplex& f) {
  std::vector<SignedComplex> out;
  for (int p = 0; p <= f.k(); ++p) out.push_back(piece(f, p));
  return out;
}

// eta = ambient + eta_{G_0 + S(G_1 + ... + S G_k)}
inline SignedComplex total_complex(const FilteredComplex& f) {
  return f.unsigned_total().with_eta(f.ambient() + iterated_cone_sign(pieces_of(f)));
}

// graded object in the derived category; derived[p] : G_p -> G_{p-1} for p >= 1 (derived[0] unused)
struct GradedComplex {
  std::vector<SignedComplex> pieces;
  std::vector<ChainMap> derived;
  std::vector<ChainHomotopy> square_witness;  // [p] : G_p -> G_{p-2}, may be empty
  Z2 ambient;

  int k() const { return static_cast<int>(pieces.size()) - 1; }
};

inline GradedComplex associated_graded(const FilteredComplex& f) {
  GradedComplex g;
  g.pieces = pieces_of(f);
  g.derived.resize(f.k() + 1);
  for (int p = 1; p <= f.k(); ++p) g.derived[p] = derived_map(f, p);
  g.square_witness.resize(f.k() + 1);
  for (int p = 2; p <= f.k(); ++p)
    for (int t = 0; t <= g.pieces[p].top(); ++t) g.square_witness[p].mats.push_back(-f.component(p + t, p, p - 2));
  g.ambient = f.ambient();
  return g;
}

// d_* d_* = d w + w d on every piece
inline bool square_witness_ok(const GradedComplex& g) {
  for (int p = 2; p <= g.k(); ++p) {
    ChainMap dd = compose(g.derived[p - 1], g.derived[p]);
    if (!is_homotopy(dd, ChainMap(dd.source(), dd.target(), {}), g.square_witness.at(p))) return false;
  }
  return true;
}

class FilteredMap {
 public:
  FilteredMap() = default;
  FilteredMap(FilteredComplex source, FilteredComplex target, std::vector<IntMatrix> mats)
      : src_(std::move(source)), tgt_(std::move(target)) {
    if (src_.k() != tgt_.k()) throw ShapeMismatch("filtration lengths differ");
    total_ = ChainMap(src_.unsigned_total(), tgt_.unsigned_total(), std::move(mats));
    for (int r = 0; r <= total_.top(); ++r)
      for (int a = 0; a <= src_.k(); ++a)
        for (int b = a + 1; b <= src_.k(); ++b)
          if (!component(r, a, b).is_zero()) throw NotFiltered("map raises filtration in degree " + std::to_string(r));
  }

  const FilteredComplex& source() const { return src_; }
  const FilteredComplex& target() const { return tgt_; }
  IntMatrix at(int r) const { return total_.at(r); }
  int top() const { return total_.top(); }

  // block f : C_{r,from} -> D_{r,to}
  IntMatrix component(int r, int from, int to) const {
    const std::size_t rows = tgt_.rank(r, to), cols = src_.rank(r, from);
    if (rows == 0 || cols == 0) return IntMatrix(rows, cols);
    return total_.at(r).block(tgt_.offset(r, to), src_.offset(r, from), rows, cols);
  }

 private:
  FilteredComplex src_, tgt_;
  ChainMap total_;
};

inline ChainMap total_map(const FilteredMap& f) {
  std::vector<IntMatrix> m;
  for (int r = 0; r <= f.top(); ++r) m.push_back(f.at(r));
  return ChainMap(total_complex(f.source()), total_complex(f.target()), m);
}

inline FilteredMap filtered_identity(const FilteredComplex& f) {
  std::vector<IntMatrix> m;
  for (int r = 0; r <= f.top(); ++r) m.push_back(IntMatrix::identity(f.total_rank(r)));
  return FilteredMap(f, f, m);
}

inline FilteredMap compose(const FilteredMap& g, const FilteredMap& f) {
  std::vector<IntMatrix> m;
  const int n = std::max(f.top(), g.top());
  for (int r = 0; r <= n; ++r) m.push_back(g.at(r) * f.at(r));
  return FilteredMap(f.source(), g.target(), m);
}

// per-piece chain maps f_0 and witnesses w = (-1)^t f_1 with f_0 d_* - d_* f_0 = d w + w d
struct GradedMap {
  std::vector<ChainMap> pieces;
  std::vector<ChainHomotopy> witness;  // [p] : G_p(C) -> G_{p-1}(D), p >= 1
};

inline GradedMap graded_map(const FilteredMap& f) {
  GradedMap out;
  const int k = f.source().k();
  out.witness.resize(k + 1);
  for (int p = 0; p <= k; ++p) {
    SignedComplex a = piece(f.source(), p), b = piece(f.target(), p);
    std::vector<IntMatrix> m;
    for (int t = 0; t <= std::max(a.top(), b.top()); ++t) m.push_back(f.component(p + t, p, p));
    out.pieces.emplace_back(a, b, m);
    if (p >= 1)
      for (int t = 0; t <= a.top(); ++t) out.witness[p].mats.push_back(signed_by(t, f.component(p + t, p, p - 1)));
  }
  return out;
}

inline bool graded_map_witness_ok(const FilteredMap& f, const GradedMap& gm) {
  const auto gs = associated_graded(f.source()), gt = associated_graded(f.target());
  for (int p = 1; p <= f.source().k(); ++p) {
    ChainMap lhs = compose(gm.pieces[p - 1], gs.derived[p]);
    ChainMap rhs = compose(gt.derived[p], gm.pieces[p]);
    if (!is_homotopy(lhs, rhs, gm.witness[p])) return false;
  }
  return true;
}

// C^fil(f)_{r,s} = D_{r,s} + C_{r-1,s-1}, d_j = (d^D_j  (-1)^{r-1} f_{j-1} ; 0  d^C_j)
inline FilteredComplex filtered_cone(const FilteredMap& f) {
  const auto& c = f.source();
  const auto& d = f.target();
  const int k = c.k() + 1;
  const int n = std::max(d.top(), c.top() + 1);
  std::vector<std::vector<std::size_t>> ranks(n + 1, std::vector<std::size_t>(k + 1));
  for (int r = 0; r <= n; ++r)
    for (int s = 0; s <= k; ++s) ranks[r][s] = d.rank(r, s) + c.rank(r - 1, s - 1);
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= n; ++r) {
    std::vector<std::size_t> rows, cols;
    for (int s = 0; s <= k; ++s) {
      rows.push_back(d.rank(r - 1, s));
      rows.push_back(c.rank(r - 2, s - 1));
      cols.push_back(d.rank(r, s));
      cols.push_back(c.rank(r - 1, s - 1));
    }
    BlockBuilder b(rows, cols);
    for (int a = 0; a <= k; ++a)
      for (int t = 0; t <= a; ++t) {
        if (a <= d.k()) b.set(2 * t, 2 * a, d.component(r, a, t));
        if (a >= 1 && t >= 1) b.set(2 * t + 1, 2 * a + 1, c.component(r - 1, a - 1, t - 1));
        if (a >= 1 && t <= d.k()) b.set(2 * t, 2 * a + 1, signed_by(r - 1, f.component(r - 1, a - 1, t)));
      }
    diffs.push_back(b.matrix());
  }
  const auto pd = pieces_of(d), pc = pieces_of(c);
  std::vector<Z2> signs;
  for (int p = 0; p <= k; ++p) {
    if (p == 0) signs.push_back(pd[0].eta());
    else if (p <= d.k()) signs.push_back(direct_sum_sign(pd[p], pc[p - 1]));
    else signs.push_back(direct_sum_sign(SignedComplex(), pc[p - 1]));
  }
  // eta_{G_*(cone)} = eta_{G_*(D) + S G_*(C)}, with ranks replaced by Euler characteristics
  auto chi_d = piece_chis(pd), chi_c = piece_chis(pc);
  std::vector<long long> chi_sc{0};
  chi_sc.insert(chi_sc.end(), chi_c.begin(), chi_c.end());
  long long chi_d_odd = 0, chi_c_all = 0;
  for (std::size_t p = 1; p < chi_d.size(); p += 2) chi_d_odd += chi_d[p];
  for (auto x : chi_c) chi_c_all += x;
  const Z2 ambient = d.ambient() + c.ambient() + beta_of(chi_d, chi_sc) + epsilon(chi_d_odd, chi_c_all);
  return FilteredComplex(ranks, diffs, signs, ambient);
}

// block permutation from the total complex of the filtered cone to the cone of the total map
inline ChainMap rearrangement_rho(const FilteredMap& f) {
  const FilteredComplex cf = filtered_cone(f);
  const SignedComplex src = total_complex(cf);
  const SignedComplex tgt = mapping_cone(total_map(f));
  const auto& c = f.source();
  const auto& d = f.target();
  std::vector<IntMatrix> mats;
  for (int r = 0; r <= src.top(); ++r) {
    IntMatrix p(tgt.rank(r), src.rank(r));
    std::size_t col = 0;
    const std::size_t d_total = d.total_rank(r);
    for (int s = 0; s <= cf.k(); ++s) {
      for (std::size_t i = 0; i < d.rank(r, s); ++i) p(d.offset(r, s) + i, col++) = 1;
      for (std::size_t i = 0; i < c.rank(r - 1, s - 1); ++i) p(d_total + c.offset(r - 1, s - 1) + i, col++) = 1;
    }
    mats.push_back(p);
  }
  return ChainMap(src, tgt, mats);
}

struct Truncation {
  int ell = 0, r = 0;
  SignedComplex complex;           // T_{ell,r} = S^{-r}(F_ell / F_{r-1})
  std::optional<ChainMap> boundary;  // T_{ell,r} -> G_{r-1}, present when r >= 1
};

inline Truncation truncation(const FilteredComplex& f, int ell, int r) {
  if (r < 0 || ell < r || ell > f.k()) throw BadBounds("need 0 <= r <= ell <= k");
  const int n = f.top() - r;
  std::vector<std::size_t> ranks;
  std::vector<IntMatrix> diffs;
  for (int q = 0; q <= std::max(n, 0); ++q) {
    std::size_t x = 0;
    for (int s = r; s <= ell; ++s) x += f.rank(q + r, s);
    ranks.push_back(x);
  }
  for (int q = 1; q <= n; ++q) {
    std::vector<std::size_t> rows, cols;
    for (int s = r; s <= ell; ++s) {
      rows.push_back(f.rank(q + r - 1, s));
      cols.push_back(f.rank(q + r, s));
    }
    BlockBuilder b(rows, cols);
    for (int a = r; a <= ell; ++a)
      for (int t = r; t <= a; ++t) b.set(t - r, a - r, f.component(q + r, a, t));
    diffs.push_back(b.matrix());
  }
  std::vector<SignedComplex> ps;
  for (int s = r; s <= ell; ++s) ps.push_back(piece(f, s));
  Truncation out{ell, r, SignedComplex(ranks, diffs, iterated_cone_sign(ps)), std::nullopt};
  if (r >= 1) {
    // (-1)^q (d_1 d_2 ... d_{ell-r+1})
    SignedComplex g = piece(f, r - 1);
    std::vector<IntMatrix> m;
    for (int q = 0; q <= std::max(out.complex.top(), g.top()); ++q) {
      std::vector<std::size_t> cols;
      for (int s = r; s <= ell; ++s) cols.push_back(f.rank(q + r, s));
      BlockBuilder b({g.rank(q)}, cols);
      for (int s = r; s <= ell; ++s) b.set(0, s - r, signed_by(q, f.component(q + r, s, r - 1)));
      m.push_back(b.matrix());
    }
    out.boundary = ChainMap(out.complex, g, m);
  }
  return out;
}

// merge the top two filtration steps; the total signed complex is unchanged
inline FilteredComplex amalgamate(const FilteredComplex& f) {
  const int k = f.k();
  if (k < 1) throw BadBounds("amalgamation needs k >= 1");
  auto ranks = f.ranks();
  for (auto& row : ranks) {
    row[k - 1] += row[k];
    row.pop_back();
  }
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= f.top(); ++r) diffs.push_back(f.total_diff(r));
  std::vector<Z2> signs(f.piece_signs().begin(), f.piece_signs().end() - 1);
  // eta_{G_{k-1}(C')} = eta_{G_{k-1}(C) + S G_k(C)}
  signs[k - 1] = direct_sum_sign(piece(f, k - 1), suspension(piece(f, k)));
  return FilteredComplex(ranks, diffs, signs, f.ambient());
}

// e[p][t] : G_p(t) -> G_{p+1}(t) chain maps, h[p][t] : G_p(t) -> G_p(t+1),
// with d_* e + e d_* + d h + h d = 1 on every piece
struct GradedContraction {
  std::vector<std::vector<IntMatrix>> e, h;
};

namespace detail {

inline IntMatrix mat_or_zero(const std::vector<IntMatrix>& v, int i, std::size_t rows, std::size_t cols) {
  if (i >= 0 && i < static_cast<int>(v.size())) return v[i];
  return IntMatrix(rows, cols);
}

}  // namespace detail

inline std::optional<GradedContraction> graded_contraction(const GradedComplex& g) {
  const int k = g.k();
  GradedContraction out;
  out.e.resize(k + 1);
  out.h.resize(k + 1);
  for (int p = k; p >= 0; --p) {
    const SignedComplex& gp = g.pieces[p];
    const SignedComplex* gq = p >= 1 ? &g.pieces[p - 1] : nullptr;
    const int tp = gp.top();
    const int te = gq ? std::max(tp, gq->top()) : -1;
    // variable layout: e_{p-1}(t) blocks, then h_p(t) blocks, each row-major
    std::vector<std::size_t> eoff(te + 2, 0), hoff(tp + 2, 0);
    for (int t = 0; t <= te; ++t) eoff[t + 1] = eoff[t] + gp.rank(t) * gq->rank(t);
    hoff[0] = eoff[te + 1];
    for (int t = 0; t <= tp; ++t) hoff[t + 1] = hoff[t] + gp.rank(t + 1) * gp.rank(t);
    const std::size_t vars = hoff[tp + 1];
    std::vector<std::vector<std::pair<std::size_t, Integer>>> rows;
    std::vector<Integer> rhs;
    for (int t = 0; t <= tp; ++t) {
      const std::size_t m = gp.rank(t);
      IntMatrix target = IntMatrix::identity(m);
      if (p < k) target -= g.derived[p + 1].at(t) * detail::mat_or_zero(out.e[p], t, g.pieces[p + 1].rank(t), m);
      const IntMatrix ds = p >= 1 ? g.derived[p].at(t) : IntMatrix();
      const IntMatrix up = gp.diff(t + 1), down = gp.diff(t);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          std::vector<std::pair<std::size_t, Integer>> row;
          // e_{p-1}(t) d_*(t)
          if (p >= 1)
            for (std::size_t l = 0; l < ds.rows(); ++l)
              if (ds(l, j) != 0) row.emplace_back(eoff[t] + i * gq->rank(t) + l, ds(l, j));
          // d(t+1) h(t)
          for (std::size_t l = 0; l < gp.rank(t + 1); ++l)
            if (up(i, l) != 0) row.emplace_back(hoff[t] + l * m + j, up(i, l));
          // h(t-1) d(t)
          if (t >= 1)
            for (std::size_t l = 0; l < gp.rank(t - 1); ++l)
              if (down(l, j) != 0) row.emplace_back(hoff[t - 1] + i * gp.rank(t - 1) + l, down(l, j));
          rows.push_back(std::move(row));
          rhs.push_back(target(i, j));
        }
    }
    if (gq) {
      // e_{p-1} commutes with the internal differentials
      for (int t = 1; t <= te; ++t) {
        const IntMatrix a = gp.diff(t), b = gq->diff(t);
        for (std::size_t i = 0; i < gp.rank(t - 1); ++i)
          for (std::size_t j = 0; j < gq->rank(t); ++j) {
            std::vector<std::pair<std::size_t, Integer>> row;
            for (std::size_t l = 0; l < gp.rank(t); ++l)
              if (a(i, l) != 0) row.emplace_back(eoff[t] + l * gq->rank(t) + j, a(i, l));
            for (std::size_t l = 0; l < gq->rank(t - 1); ++l)
              if (b(l, j) != 0) row.emplace_back(eoff[t - 1] + i * gq->rank(t - 1) + l, -b(l, j));
            rows.push_back(std::move(row));
            rhs.push_back(0);
          }
      }
    }
    std::vector<Integer> sol(vars);
    if (vars == 0) {
      for (auto& x : rhs)
        if (x != 0) return std::nullopt;
    } else if (!rows.empty()) {
      IntMatrix a(rows.size(), vars), b(rows.size(), 1);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (auto& [v, c] : rows[i]) a(i, v) += c;
        b(i, 0) = rhs[i];
      }
      auto x = try_solve_integral(a, b);
      if (!x) return std::nullopt;
      for (std::size_t i = 0; i < vars; ++i) sol[i] = (*x)(i, 0);
    }
    auto extract = [&](std::size_t off, std::size_t r, std::size_t c) {
      IntMatrix m(r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = sol[off + i * c + j];
      return m;
    };
    if (gq) {
      out.e[p - 1].clear();
      for (int t = 0; t <= te; ++t) out.e[p - 1].push_back(extract(eoff[t], gp.rank(t), gq->rank(t)));
    }
    for (int t = 0; t <= tp; ++t) out.h[p].push_back(extract(hoff[t], gp.rank(t + 1), gp.rank(t)));
  }
  return out;
}

inline bool is_graded_contraction(const GradedComplex& g, const GradedContraction& c) {
  const int k = g.k();
  for (int p = 0; p <= k; ++p) {
    const auto& gp = g.pieces[p];
    for (int t = 0; t <= gp.top(); ++t) {
      IntMatrix lhs = gp.diff(t + 1) * detail::mat_or_zero(c.h[p], t, gp.rank(t + 1), gp.rank(t));
      if (t >= 1) lhs += detail::mat_or_zero(c.h[p], t - 1, gp.rank(t), gp.rank(t - 1)) * gp.diff(t);
      if (p >= 1) lhs += detail::mat_or_zero(c.e[p - 1], t, gp.rank(t), g.pieces[p - 1].rank(t)) * g.derived[p].at(t);
      if (p < k) lhs += g.derived[p + 1].at(t) * detail::mat_or_zero(c.e[p], t, g.pieces[p + 1].rank(t), gp.rank(t));
      if (lhs != IntMatrix::identity(gp.rank(t))) return false;
    }
    if (p < k) {
      const auto& gn = g.pieces[p + 1];
      for (int t = 1; t <= std::max(gp.top(), gn.top()); ++t) {
        IntMatrix a = gn.diff(t) * detail::mat_or_zero(c.e[p], t, gn.rank(t), gp.rank(t));
        IntMatrix b = detail::mat_or_zero(c.e[p], t - 1, gn.rank(t - 1), gp.rank(t - 1)) * gp.diff(t);
        if (a != b) return false;
      }
    }
  }
  return true;
}

// Gamma = beta alpha^{-1} with beta built from h (diagonal) and (-1)^t e (one step up in filtration)
inline Contraction filtered_contraction_from_graded(const FilteredComplex& f, const GradedContraction& c) {
  const SignedComplex tot = total_complex(f);
  const int n = f.top(), k = f.k();
  std::vector<IntMatrix> beta;
  for (int r = 0; r <= n; ++r) {
    std::vector<std::size_t> rows, cols;
    for (int s = 0; s <= k; ++s) {
      rows.push_back(f.rank(r + 1, s));
      cols.push_back(f.rank(r, s));
    }
    BlockBuilder b(rows, cols);
    for (int s = 0; s <= std::min(k, r); ++s) {
      const int t = r - s;
      b.set(s, s, detail::mat_or_zero(c.h.at(s), t, f.rank(r + 1, s), f.rank(r, s)));
      if (s < k) b.set(s + 1, s, signed_by(t, detail::mat_or_zero(c.e.at(s), t, f.rank(r + 1, s + 1), f.rank(r, s))));
    }
    beta.push_back(b.matrix());
  }
  auto beta_at = [&](int r) { return (r >= 0 && r <= n) ? beta[r] : IntMatrix(tot.rank(r + 1), tot.rank(r)); };
  Contraction out{tot, {}};
  for (int r = 0; r <= n; ++r) {
    IntMatrix alpha = tot.diff(r + 1) * beta_at(r);
    if (r >= 1) alpha += beta_at(r - 1) * tot.diff(r);
    // alpha must be upper triangular in filtration with identity diagonal blocks
    for (int a = 0; a <= k; ++a)
      for (int b = a; b <= k; ++b) {
        const std::size_t rows = f.rank(r, b), cols = f.rank(r, a);
        if (!rows || !cols) continue;
        IntMatrix blk = alpha.block(f.offset(r, b), f.offset(r, a), rows, cols);
        if (a == b ? blk != IntMatrix::identity(rows) : !blk.is_zero())
          throw AlphaNotInvertible("alpha block (" + std::to_string(b) + "," + std::to_string(a) + ") in degree " + std::to_string(r));
      }
    out.gamma.push_back(beta[r] * inverse_unimodular(alpha));
  }
  return out;
}

// read a graded contraction off a filtered contraction (the converse direction)
inline GradedContraction graded_from_filtered_contraction(const FilteredComplex& f, const Contraction& g) {
  const int k = f.k();
  GradedContraction out;
  out.e.resize(k + 1);
  out.h.resize(k + 1);
  for (int s = 0; s <= k; ++s)
    for (int t = 0; t <= f.top() - s; ++t) {
      const int r = s + t;
      const IntMatrix gm = g.at(r);
      auto blk = [&](int to) {
        const std::size_t rows = f.rank(r + 1, to), cols = f.rank(r, s);
        if (!rows || !cols) return IntMatrix(rows, cols);
        return gm.block(f.offset(r + 1, to), f.offset(r, s), rows, cols);
      };
      out.h[s].push_back(blk(s));
      if (s < k) out.e[s].push_back(signed_by(t, blk(s + 1)));
    }
  return out;
}

// i_* tau^NEW of (d_* + e) : G_odd -> G_even, summed in ascending order, plus the ambient sign
inline Z2 graded_torsion(const GradedComplex& g, const GradedContraction& c) {
  const int k = g.k();
  std::optional<SignedComplex> odd, even;
  std::vector<int> odds, evens;
  for (int p = 0; p <= k; ++p) {
    auto& slot = (p % 2) ? odd : even;
    slot = slot ? direct_sum(*slot, g.pieces[p]) : g.pieces[p];
    ((p % 2) ? odds : evens).push_back(p);
  }
  if (!odd) odd = SignedComplex();
  const int n = std::max(odd->top(), even->top());
  std::vector<IntMatrix> mats;
  for (int t = 0; t <= n; ++t) {
    std::vector<std::size_t> rows, cols;
    for (int p : evens) rows.push_back(g.pieces[p].rank(t));
    for (int p : odds) cols.push_back(g.pieces[p].rank(t));
    BlockBuilder b(rows, cols);
    for (std::size_t j = 0; j < odds.size(); ++j) {
      const int p = odds[j];
      b.set(j, j, g.derived[p].at(t));  // into G_{p-1}, which is evens[j]
      if (p + 1 <= k)
        b.set(j + 1, j, detail::mat_or_zero(c.e[p], t, g.pieces[p + 1].rank(t), g.pieces[p].rank(t)));
    }
    mats.push_back(b.matrix());
  }
  ChainMap f(*odd, *even, mats);
  return tau_new_map(f) + g.ambient;
}

inline Z2 graded_torsion(const GradedComplex& g) {
  auto c = graded_contraction(g);
  if (!c) throw NotContractible("associated graded complex has no contraction");
  return graded_torsion(g, *c);
}

struct InvarianceReport {
  Z2 lhs, rhs;
  bool holds() const { return lhs == rhs; }
};

// tau^NEW(C, eta_C) against i_* tau^NEW(G_*(C), eta_{G_*(C)})
inline InvarianceReport check_invariance1(const FilteredComplex& f) {
  const GradedComplex g = associated_graded(f);
  auto c = graded_contraction(g);
  if (!c) throw NotContractible("associated graded complex has no contraction");
  const SignedComplex tot = total_complex(f);
  return {torsion_contractible(tot), graded_torsion(g, *c)};
}

// tau^NEW(f) against i_* tau^NEW(G_*(f)) through the filtered cone
inline InvarianceReport check_invariance2(const FilteredMap& f) {
  const GradedComplex g = associated_graded(filtered_cone(f));
  auto c = graded_contraction(g);
  if (!c) throw NotEquivalence("graded cone has no contraction");
  return {tau_new_map(total_map(f)), graded_torsion(g, *c)};
}

inline FilteredComplex filtered_direct_sum(const FilteredComplex& a, const FilteredComplex& b) {
  if (a.k() != b.k()) throw ShapeMismatch("filtration lengths differ");
  const int k = a.k(), n = std::max(a.top(), b.top());
  std::vector<std::vector<std::size_t>> ranks(n + 1, std::vector<std::size_t>(k + 1));
  for (int r = 0; r <= n; ++r)
    for (int s = 0; s <= k; ++s) ranks[r][s] = a.rank(r, s) + b.rank(r, s);
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= n; ++r) {
    std::vector<std::size_t> rows, cols;
    for (int s = 0; s <= k; ++s) {
      rows.push_back(a.rank(r - 1, s));
      rows.push_back(b.rank(r - 1, s));
      cols.push_back(a.rank(r, s));
      cols.push_back(b.rank(r, s));
    }
    BlockBuilder bb(rows, cols);
    for (int x = 0; x <= k; ++x)
      for (int t = 0; t <= x; ++t) {
        bb.set(2 * t, 2 * x, a.component(r, x, t));
        bb.set(2 * t + 1, 2 * x + 1, b.component(r, x, t));
      }
    diffs.push_back(bb.matrix());
  }
  const auto pa = pieces_of(a), pb = pieces_of(b);
  std::vector<Z2> signs;
  for (int p = 0; p <= k; ++p) signs.push_back(direct_sum_sign(pa[p], pb[p]));
  auto ca = piece_chis(pa), cb = piece_chis(pb);
  long long odd_a = 0, all_b = 0;
  for (std::size_t p = 1; p < ca.size(); p += 2) odd_a += ca[p];
  for (auto x : cb) all_b += x;
  return FilteredComplex(ranks, diffs, signs, a.ambient() + b.ambient() + beta_of(ca, cb) + epsilon(odd_a, all_b));
}

// inclusion of the first summand and projection onto it
inline FilteredMap filtered_inclusion(const FilteredComplex& a, const FilteredComplex& b) {
  const FilteredComplex s = filtered_direct_sum(a, b);
  std::vector<IntMatrix> m;
  for (int r = 0; r <= s.top(); ++r) {
    IntMatrix p(s.total_rank(r), a.total_rank(r));
    for (int x = 0; x <= a.k(); ++x)
      for (std::size_t i = 0; i < a.rank(r, x); ++i) p(s.offset(r, x) + i, a.offset(r, x) + i) = 1;
    m.push_back(p);
  }
  return FilteredMap(a, s, m);
}

inline FilteredMap filtered_projection(const FilteredComplex& a, const FilteredComplex& b) {
  const FilteredComplex s = filtered_direct_sum(a, b);
  std::vector<IntMatrix> m;
  for (int r = 0; r <= s.top(); ++r) {
    IntMatrix p(a.total_rank(r), s.total_rank(r));
    for (int x = 0; x <= a.k(); ++x)
      for (std::size_t i = 0; i < a.rank(r, x); ++i) p(a.offset(r, x) + i, s.offset(r, x) + i) = 1;
    m.push_back(p);
  }
  return FilteredMap(s, a, m);
}

// change of basis by filtered automorphisms p[r] (block upper triangular); returns the map F -> F'
inline FilteredMap filtered_basis_change(const FilteredComplex& f, const std::vector<IntMatrix>& p,
                                         std::vector<Z2> piece_signs, Z2 ambient) {
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= f.top(); ++r) diffs.push_back(p.at(r - 1) * f.total_diff(r) * inverse_unimodular(p.at(r)));
  FilteredComplex g(f.ranks(), diffs, std::move(piece_signs), ambient);
  return FilteredMap(f, g, p);
}

// exactly degrees 0..n
inline SignedComplex fit(const SignedComplex& c, int n) { return pad(trim(c, n), n); }

// C^dual_{r,s} = C^*_{n+k-r, k-s}, d^dual_j = (-1)^{r+s+j(n+r)} d_j^T
inline FilteredComplex filtered_dual(const FilteredComplex& f, int n) {
  const int k = f.k(), top = n + k;
  if (f.top() > top) {
    for (int r = top + 1; r <= f.top(); ++r)
      if (f.total_rank(r)) throw NotAdmissible("complex has modules above degree n + k");
  }
  for (int r = 0; r <= f.top(); ++r)
    for (int s = 0; s <= k; ++s)
      if (f.rank(r, s) && (r - s < 0 || r - s > n))
        throw NotAdmissible("block (" + std::to_string(r) + "," + std::to_string(s) + ") outside 0 <= r-s <= n");
  const auto ps = pieces_of(f);
  std::vector<SignedComplex> duals;
  for (int p = 0; p <= k; ++p) {
    SignedComplex dp = dual_complex(ps[p], n);
    if (homology(fit(ps[p], n)) != homology(dp))
      throw NotAdmissible("graded piece " + std::to_string(p) + " is not self-dual up to homotopy");
    duals.push_back(dp);
  }
  std::vector<std::vector<std::size_t>> ranks(top + 1, std::vector<std::size_t>(k + 1));
  for (int r = 0; r <= top; ++r)
    for (int s = 0; s <= k; ++s) ranks[r][s] = f.rank(top - r, k - s);
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= top; ++r) {
    BlockBuilder b(ranks[r - 1], ranks[r]);
    for (int s = 0; s <= k; ++s)
      for (int j = 0; j <= s; ++j)
        b.set(s - j, s, signed_by(r + s + j * (n + r), f.component(top - r + 1, k - s + j, k - s).transpose()));
    diffs.push_back(b.matrix());
  }
  std::vector<Z2> signs;
  for (int p = 0; p <= k; ++p) signs.push_back(duals[k - p].eta());
  const auto chis = piece_chis(ps);
  return FilteredComplex(ranks, diffs, signs, f.ambient() + beta_of(chis, chis) + alpha_of(chis, k));
}

// diagonal sign map C^{n+k-*} -> F^dual, (-1)^{s(n+r+1)} on the block C^*_{n+k-r, k-s}
inline ChainMap theta_map(const FilteredComplex& f, int n) {
  const FilteredComplex fd = filtered_dual(f, n);
  const int k = f.k(), top = n + k;
  const SignedComplex src = dual_complex(total_complex(f), top);
  const SignedComplex tgt = total_complex(fd);
  std::vector<IntMatrix> mats;
  for (int r = 0; r <= top; ++r) {
    std::vector<std::size_t> rows, cols;
    for (int s = 0; s <= k; ++s) {
      rows.push_back(fd.rank(r, s));
      cols.push_back(f.rank(top - r, s));
    }
    BlockBuilder b(rows, cols);
    for (int s = 0; s <= k; ++s) b.set(s, k - s, signed_by(s * (n + r + 1), IntMatrix::identity(rows[s])));
    mats.push_back(b.matrix());
  }
  return ChainMap(src, tgt, mats);
}

// the graded pieces of the dual are the n-duals of the pieces in reverse order, and the derived
// differentials are (-1)^p times the transposed derived differentials
inline bool kdual_holds(const FilteredComplex& f, int n) {
  const FilteredComplex fd = filtered_dual(f, n);
  const int k = f.k();
  const GradedComplex g = associated_graded(f), gd = associated_graded(fd);
  for (int p = 0; p <= k; ++p)
    if (fit(gd.pieces[p], n) != dual_complex(g.pieces[k - p], n)) return false;
  for (int p = 1; p <= k; ++p)
    for (int t = 0; t <= n; ++t)
      if (gd.derived[p].at(t) != signed_by(p, g.derived[k - p + 1].at(n - t).transpose())) return false;
  const auto chis = piece_chis(g.pieces);
  return gd.ambient == g.ambient + beta_of(chis, chis) + alpha_of(chis, k);
}

// tensor filtration: blocks C_s (x) D_{r-s}, d_0 = 1 (x) d^D, d_1 = (-1)^{r-s} d^C (x) 1
inline FilteredComplex tensor_filtered(const SignedComplex& c, const SignedComplex& d) {
  const int k = c.top(), n = c.top() + d.top();
  std::vector<std::vector<std::size_t>> ranks(n + 1, std::vector<std::size_t>(k + 1));
  for (int r = 0; r <= n; ++r)
    for (int s = 0; s <= k; ++s) ranks[r][s] = c.rank(s) * d.rank(r - s);
  std::vector<IntMatrix> diffs;
  for (int r = 1; r <= n; ++r) {
    BlockBuilder b(ranks[r - 1], ranks[r]);
    for (int s = 0; s <= k; ++s) {
      if (!ranks[r][s]) continue;
      b.set(s, s, kron(IntMatrix::identity(c.rank(s)), d.diff(r - s)));
      if (s >= 1) b.set(s - 1, s, signed_by(r - s, kron(c.diff(s), IntMatrix::identity(d.rank(r - s)))));
    }
    diffs.push_back(b.matrix());
  }
  // each piece is rank(C_s) copies of D; the ambient sign is the transfer chi(D) eta_C
  std::vector<Z2> signs;
  for (int s = 0; s <= k; ++s) {
    SignedComplex x = SignedComplex();
    for (std::size_t i = 0; i < c.rank(s); ++i) x = direct_sum(x, d);
    signs.push_back(x.eta());
  }
  return FilteredComplex(ranks, diffs, signs, epsilon(euler_char(d), c.eta().bit));
}

// total matrices of a (x) b between tensor complexes, blocks C_s (x) D_{r-s}
inline std::vector<IntMatrix> tensor_map_mats(const ChainMap& a, const ChainMap& b) {
  const auto &c1 = a.source(), &c2 = a.target(), &d1 = b.source(), &d2 = b.target();
  const int n = std::max(c1.top() + d1.top(), c2.top() + d2.top());
  std::vector<IntMatrix> out;
  for (int r = 0; r <= n; ++r) {
    std::vector<std::size_t> rows, cols;
    const int k = std::max(c1.top(), c2.top());
    for (int s = 0; s <= k; ++s) {
      rows.push_back(s <= c2.top() ? c2.rank(s) * d2.rank(r - s) : 0);
      cols.push_back(s <= c1.top() ? c1.rank(s) * d1.rank(r - s) : 0);
    }
    BlockBuilder bb(rows, cols);
    for (int s = 0; s <= k; ++s)
      if (rows[s] && cols[s]) bb.set(s, s, kron(a.at(s), b.at(r - s)));
    out.push_back(bb.matrix());
  }
  return out;
}

// abelian folding of the top piece along a splitting (gamma : G_{k-1} -> G_k, h : 1 - gamma d_* = d h + h d)
struct Fold {
  GradedComplex folded;
  ChainMap g_gamma;  // G_{k-1} -> C(d_*) + G_k
  ChainMap delta_f;  // C(d_*) + G_k -> G_{k-1}
  Z2 torsion;        // tau of the isomorphism G_* = G'_* + E, i.e. tau^NEW(g_gamma)
};

inline Fold fold(const GradedComplex& g, const ChainMap& gamma, const ChainHomotopy& h) {
  const int k = g.k();
  if (k < 1) throw NotSplit("folding needs at least two pieces");
  const ChainMap& dk = g.derived[k];
  const SignedComplex& top = g.pieces[k];
  const SignedComplex& below = g.pieces[k - 1];
  if (gamma.source() != below || gamma.target() != top) throw NotSplit("splitting map has the wrong ends");
  if (!is_homotopy(identity_map(top), compose(gamma, dk), h)) throw NotSplit("h is not a homotopy 1 - gamma d_* = dh + hd");
  const SignedComplex cone = mapping_cone(dk);
  const int n = cone.top();
  // Delta = (1 - d_* gamma, (-1)^{r+1} d_* h) : C(d_*)_r = G_{k-1,r} + G_{k,r-1} -> G_{k-1,r}
  std::vector<IntMatrix> dm, gm, fm;
  for (int r = 0; r <= n; ++r) {
    BlockBuilder b({below.rank(r)}, {below.rank(r), top.rank(r - 1)});
    b.set(0, 0, IntMatrix::identity(below.rank(r)) - dk.at(r) * gamma.at(r));
    if (r >= 1) b.set(0, 1, signed_by(r + 1, dk.at(r) * h.at(r - 1, top.rank(r), top.rank(r - 1))));
    dm.push_back(b.matrix());
  }
  ChainMap delta;
  try {
    delta = ChainMap(cone, below, dm);
  } catch (const NotAChainMap& e) {
    throw NotSplit(std::string("Delta is not a chain map: ") + e.what());
  }
  const SignedComplex sum = direct_sum(cone, top);
  const int m = std::max(sum.top(), below.top());
  for (int r = 0; r <= m; ++r) {
    BlockBuilder b({below.rank(r), top.rank(r - 1), top.rank(r)}, {below.rank(r)});
    b.set(0, 0, IntMatrix::identity(below.rank(r)));
    b.set(2, 0, gamma.at(r));
    gm.push_back(b.matrix());
    BlockBuilder c({below.rank(r)}, {below.rank(r), top.rank(r - 1), top.rank(r)});
    c.set(0, 0, delta.at(r).block(0, 0, below.rank(r), below.rank(r)));
    c.set(0, 1, delta.at(r).block(0, below.rank(r), below.rank(r), top.rank(r - 1)));
    c.set(0, 2, dk.at(r));
    fm.push_back(c.matrix());
  }
  Fold out;
  out.g_gamma = ChainMap(below, sum, gm);
  out.delta_f = ChainMap(sum, below, fm);
  out.folded.pieces.assign(g.pieces.begin(), g.pieces.end() - 2);
  out.folded.pieces.push_back(cone);
  out.folded.derived.assign(g.derived.begin(), g.derived.end() - 2);
  if (k >= 2) out.folded.derived.push_back(compose(g.derived[k - 1], delta));
  else out.folded.derived.resize(1);
  out.folded.ambient = g.ambient;
  out.torsion = tau_new_map(out.g_gamma);
  return out;
}

}  // namespace tl
