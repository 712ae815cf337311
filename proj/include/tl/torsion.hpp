#pragma once

#include <vector>

#include "complex.hpp"

namespace tl {

// gamma[r] : C_r -> C_{r+1} with d gamma + gamma d = 1
struct Contraction {
  SignedComplex complex;
  std::vector<IntMatrix> gamma;

  IntMatrix at(int r) const {
    if (r >= 0 && r < static_cast<int>(gamma.size())) return gamma[r];
    return IntMatrix(complex.rank(r + 1), complex.rank(r));
  }
};

inline bool is_contraction(const SignedComplex& c, const std::vector<IntMatrix>& gamma) {
  for (int r = 0; r <= c.top(); ++r) {
    if (gamma.at(r).rows() != c.rank(r + 1) || gamma[r].cols() != c.rank(r)) return false;
    IntMatrix lhs = c.diff(r + 1) * gamma[r];
    if (r >= 1) lhs += gamma[r - 1] * c.diff(r);
    if (lhs != IntMatrix::identity(c.rank(r))) return false;
  }
  return true;
}

// Optional perturbations of the splitting choices: kernel_change[r] is a unimodular change of the
// kernel basis of d_r, lift_shift[r] adds kernel columns K_r * Z to the lift W_r.
struct SplittingChoice {
  std::vector<IntMatrix> kernel_change;
  std::vector<IntMatrix> lift_shift;
};

inline Contraction build_contraction(const SignedComplex& c, const SplittingChoice& choice = {}) {
  if (auto r = first_homology_degree(c)) throw NotAcyclic("nonzero homology in degree " + std::to_string(*r));
  const int n = c.top();
  std::vector<IntMatrix> k(n + 2), w(n + 2);
  for (int r = 0; r <= n + 1; ++r) {
    k[r] = kernel_basis(c.diff(r));
    if (r < static_cast<int>(choice.kernel_change.size()) && choice.kernel_change[r].rows() == k[r].cols())
      k[r] = k[r] * choice.kernel_change[r];
  }
  w[0] = IntMatrix(c.rank(0), 0);
  for (int r = 1; r <= n + 1; ++r) {
    // d_r W_r = K_{r-1}: W_r maps isomorphically onto ker d_{r-1}
    w[r] = solve_integral(c.diff(r), k[r - 1]);
    if (r < static_cast<int>(choice.lift_shift.size()) && choice.lift_shift[r].rows() == k[r].cols() &&
        choice.lift_shift[r].cols() == w[r].cols())
      w[r] += k[r] * choice.lift_shift[r];
  }
  Contraction out{c, {}};
  for (int r = 0; r <= n; ++r) {
    // on ker d_r gamma inverts d restricted to W_{r+1}; on W_r it vanishes
    IntMatrix basis = hstack(k[r], w[r]);
    IntMatrix image = hstack(w[r + 1], IntMatrix(c.rank(r + 1), w[r].cols()));
    out.gamma.push_back(image * inverse_unimodular(basis));
  }
  return out;
}

// unit_det of (d + gamma) : C_odd -> C_even, blocks in ascending degree
inline Z2 plain_torsion(const SignedComplex& c, const std::vector<IntMatrix>& gamma) {
  std::vector<std::size_t> rows, cols;
  for (int r = 0; r <= c.top(); r += 2) rows.push_back(c.rank(r));
  for (int r = 1; r <= c.top(); r += 2) cols.push_back(c.rank(r));
  if (rows.empty()) rows.push_back(0);
  BlockBuilder b(rows, cols);
  for (int r = 1; r <= c.top(); r += 2) {
    b.set((r - 1) / 2, r / 2, c.d(r));
    if (r + 1 <= c.top()) b.set((r + 1) / 2, r / 2, gamma.at(r));
  }
  const IntMatrix& m = b.matrix();
  if (!m.square()) throw NotAcyclic("odd and even ranks differ");
  return unit_det(m);
}

// tau^NEW(C, eta) = tau(d + gamma) + eta
inline Z2 torsion_contractible(const SignedComplex& c) {
  return plain_torsion(c, build_contraction(c).gamma) + c.eta();
}

inline Z2 torsion_with(const Contraction& g) { return plain_torsion(g.complex, g.gamma) + g.complex.eta(); }

inline Z2 tau_new_map(const ChainMap& f) {
  const SignedComplex cone = mapping_cone(f);
  Z2 t;
  try {
    t = plain_torsion(cone, build_contraction(cone).gamma);
  } catch (const NotAcyclic& e) {
    throw NotEquivalence(e.what());
  }
  const auto& c = f.source();
  const auto& d = f.target();
  const SignedComplex sc = suspension(c);
  const Z2 via_cone = t + cone.eta();
  // tau(C(f)) - beta(D, SC) + rank(D_odd) chi(SC) + eta_D - eta_C
  const Z2 via_formula = t + beta(d, sc) + epsilon(odd_rank(d), euler_char(sc)) + d.eta() + c.eta();
  if (via_cone != via_formula) throw RouteMismatch("cone sign and closed formula disagree");
  return via_cone;
}

// sum of (-1)^r tau(f_r) - eta_C + eta_D for a degreewise isomorphism
inline Z2 tau_iso(const ChainMap& f) {
  Z2 s = f.source().eta() + f.target().eta();
  for (int r = 0; r <= f.top(); ++r) {
    const IntMatrix m = f.at(r);
    if (!m.square()) throw NotAUnit("f_" + std::to_string(r) + " is " + m.shape());
    if (m.rows()) s += unit_det(m);
  }
  return s;
}

}  // namespace tl
