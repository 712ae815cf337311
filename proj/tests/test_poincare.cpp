#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace tl;

namespace {

SymmetricComplex of_form(const IntMatrix& h, int k = 0) { return form_to_complex(UnimodularForm(h), k); }

long long oracle_signature(const IntMatrix& h) {
  const Inertia i = oracle::descartes_inertia(h);
  return static_cast<long long>(i.pos) - static_cast<long long>(i.neg);
}

// form data pushed through padding and basis changes, built here rather than by the library generator
struct Disguised {
  SymmetricComplex x;
  IntMatrix form;
  int k;
};

Disguised disguised_form(Rng& rng) {
  const IntMatrix h = random_form(rng, 5);
  const int k = static_cast<int>(rng.uniform(0, 2));
  const int n = 4 * k;
  SymmetricComplex x = of_form(h, k);
  if (n > 0) {
    const int r = static_cast<int>(rng.uniform(1, n));
    x = direct_sum(x, padding(elementary(n, r, rng.sign()), n));
  }
  for (int i = 0; i < 2; ++i) {
    const int q = static_cast<int>(rng.uniform(0, n));
    if (x.complex().rank(q)) x = basis_change(x, q, random_unimodular(rng, x.complex().rank(q), 6).p);
  }
  return {x, h, k};
}

}  // namespace

TEST(FormToComplex, Examples) {
  const SymmetricComplex u = of_form(IntMatrix{{1}});
  EXPECT_EQ(u.n(), 0);
  EXPECT_EQ(u.phi0().at(0), IntMatrix{{1}});
  const SymmetricComplex h = fixtures::hyperbolic_plane();
  EXPECT_EQ(h.complex().rank(0), 2u);
  const SymmetricComplex e = of_form(e8(), 1);
  EXPECT_EQ(e.n(), 4);
  for (int r = 0; r <= 4; ++r) EXPECT_EQ(e.complex().rank(r), r == 2 ? 8u : 0u);
}

TEST(FormToComplex, RejectsBadForms) {
  EXPECT_THROW(UnimodularForm(IntMatrix{{2}}), NotUnimodular);
  EXPECT_THROW(UnimodularForm(IntMatrix{{1, 1}, {0, 1}}), NotSymmetric);
  EXPECT_THROW(SymmetricComplex(SignedComplex::free({1}), 0, {IntMatrix{{3}}}), NotEquivalence);
  EXPECT_THROW(SymmetricComplex(SignedComplex::free({1, 0}), 1, {IntMatrix(1, 0), IntMatrix(0, 1)}), NotEquivalence);
}

TEST(TauSymmetric, Examples) {
  EXPECT_EQ(tau_new_symmetric(fixtures::hyperbolic_plane()), Z2(1));
  EXPECT_EQ(tau_new_symmetric(fixtures::unit()), Z2(0));
  EXPECT_EQ(tau_new_symmetric(fixtures::round_example()), Z2(1));
}

TEST(TauSymmetric, EvenRankFormsGiveTheDeterminant) {
  for (int i = 0; i < 40; ++i) {
    Rng rng(41, i);
    IntMatrix h = random_form(rng, 6);
    if (h.rows() % 2) h = block_diag({h, IntMatrix{{rng.sign()}}});
    const int k = static_cast<int>(rng.uniform(0, 2));
    EXPECT_EQ(tau_new_symmetric(of_form(h, k)), Z2(oracle::leibniz_det(h) < 0)) << "trial " << i;
  }
}

TEST(TauSymmetric, FormsAgainstPermutationExpansion) {
  // degree 2k carries alpha = k rank
  for (int i = 0; i < 40; ++i) {
    Rng rng(42, i);
    const IntMatrix h = random_form(rng, 6);
    const int k = static_cast<int>(rng.uniform(0, 2));
    const Z2 expected = Z2(oracle::leibniz_det(h) < 0) + Z2::of(static_cast<long long>(k) * h.rows());
    EXPECT_EQ(tau_new_symmetric(of_form(h, k)), expected);
  }
}

TEST(Negate, Examples) {
  EXPECT_EQ(negate(fixtures::unit()), of_form(IntMatrix{{-1}}));
  for (int i = 0; i < 20; ++i) {
    Rng rng(43, i);
    const SymmetricComplex x = random_symmetric(rng, 6, 2);
    EXPECT_EQ(negate(negate(x)), x);
    EXPECT_EQ(tau_new_symmetric(negate(x)), tau_new_symmetric(x) + Z2::of(euler_char(x.complex())));
  }
}

TEST(Signature, Examples) {
  EXPECT_EQ(signature(of_form(IntMatrix::identity(2))), 2);
  EXPECT_EQ(signature(fixtures::hyperbolic_plane()), 0);
  EXPECT_EQ(signature(fixtures::e8_form()), 8);
  EXPECT_EQ(signature(of_form(e8(), 1)), 8);
  EXPECT_EQ(signature(fixtures::round_example()), 2);
}

TEST(Signature, DisguisedFormsMatchDescartes) {
  for (int i = 0; i < 40; ++i) {
    Rng rng(44, i);
    const Disguised d = disguised_form(rng);
    EXPECT_EQ(signature(d.x), oracle_signature(d.form)) << "trial " << i;
    EXPECT_EQ(euler_char(d.x.complex()), static_cast<long long>(d.form.rows()));
    // padding and basis changes do not move the torsion either
    const Z2 expected = Z2(oracle::leibniz_det(d.form) < 0) + Z2::of(static_cast<long long>(d.k) * d.form.rows());
    EXPECT_EQ(tau_new_symmetric(d.x), expected) << "trial " << i;
  }
}

TEST(Signature, ZeroOutsideDimensionsDivisibleByFour) {
  const SymmetricComplex x(SignedComplex::free({0, 1, 0}), 2, {IntMatrix(0, 0), IntMatrix{{1}}, IntMatrix(0, 0)});
  EXPECT_EQ(signature(x), 0);
  EXPECT_THROW(check_signmod4(x), DimensionNotDivisibleBy4);
}

TEST(SignMod4, Examples) {
  const CongruenceReport u = check_signmod4(fixtures::unit());
  EXPECT_EQ(u.lhs, 1);
  EXPECT_EQ(u.rhs, 1);
  const CongruenceReport h = check_signmod4(fixtures::hyperbolic_plane());
  EXPECT_EQ(h.lhs, 0);
  EXPECT_EQ(h.rhs, 0);
  const SymmetricComplex round = fixtures::round_example();
  EXPECT_TRUE(check_signmod4(round).holds());
  EXPECT_EQ(signature(round), 2);
  EXPECT_EQ(euler_char(round.complex()), 0);
}

TEST(SignMod4, RandomComplexes) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(45, i);
    const SymmetricComplex x = random_symmetric(rng, 8, 2);
    EXPECT_TRUE(check_signmod4(x).holds()) << "trial " << i;
    if (is_round(x) && is_simple(x)) EXPECT_EQ(mod(signature(x), 4), 0);
  }
}

TEST(DetMod4, Examples) {
  EXPECT_TRUE(check_det_mod4(fixtures::diag_form({1})).holds());
  EXPECT_TRUE(check_det_mod4(UnimodularForm(hyperbolic())).holds());
  const CongruenceReport r = check_det_mod4(fixtures::diag_form({1, -1}));
  EXPECT_EQ(r.lhs, 0);
  EXPECT_EQ(r.rhs, 0);
}

TEST(DetMod4, RandomForms) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(46, i);
    const UnimodularForm h(random_form(rng, 8));
    EXPECT_TRUE(check_det_mod4(h).holds());
    const long long d = det(h.matrix()) == 1 ? 1 : -1;
    EXPECT_EQ(mod(2 * tau_new_symmetric(form_to_complex(h, 0)).bit, 4), mod(d - 1, 4));
  }
}

TEST(Mod8, Examples) {
  EXPECT_EQ(check_mod8_even(UnimodularForm(hyperbolic())).lhs, 0);
  EXPECT_EQ(check_mod8_even(fixtures::e8_form()).lhs, 0);
  EXPECT_EQ(signature(fixtures::e8_form()), 8);
  const UnimodularForm eh(block_diag({e8(), hyperbolic()}));
  EXPECT_TRUE(check_mod8_even(eh).holds());
  EXPECT_EQ(signature(eh), 8);
  EXPECT_THROW(check_mod8_even(fixtures::diag_form({1})), NotEven);
}

TEST(Tensor, UnitIsNeutral) {
  for (int i = 0; i < 15; ++i) {
    Rng rng(47, i);
    const SymmetricComplex y = random_symmetric(rng, 4, 1);
    const SymmetricComplex z = tensor_symmetric(fixtures::unit(), y);
    EXPECT_EQ(z.n(), y.n());
    EXPECT_EQ(z.complex().ranks(), y.complex().ranks());
    EXPECT_EQ(tau_new_symmetric(z), tau_new_symmetric(y));
    EXPECT_EQ(signature(z), signature(y));
  }
}

TEST(Tensor, ProductFormulaOnHyperbolic) {
  const SymmetricComplex z = tensor_symmetric(fixtures::unit(), fixtures::hyperbolic_plane());
  EXPECT_EQ(tau_new_symmetric(z), Z2(1));
}

TEST(Tensor, SignatureIsMultiplicative) {
  for (int i = 0; i < 20; ++i) {
    Rng rng(48, i);
    const IntMatrix a = random_form(rng, 3), b = random_form(rng, 3);
    const SymmetricComplex z = tensor_symmetric(of_form(a), of_form(b));
    EXPECT_EQ(signature(z), oracle_signature(a) * oracle_signature(b));
    EXPECT_EQ(signature(z), oracle_signature(kron(a, b)));
  }
}

TEST(Tensor, ProductFormula) {
  for (int i = 0; i < 25; ++i) {
    Rng rng(49, i);
    const SymmetricComplex x = random_symmetric(rng, 3, 1), y = random_symmetric(rng, 3, 1);
    const SymmetricComplex z = tensor_symmetric(x, y);
    const Z2 expected = Z2::of(euler_char(x.complex())) * tau_new_symmetric(y) +
                        Z2::of(euler_char(y.complex())) * tau_new_symmetric(x);
    EXPECT_EQ(tau_new_symmetric(z), expected) << "trial " << i;
    EXPECT_EQ(euler_char(z.complex()), euler_char(x.complex()) * euler_char(y.complex()));
  }
}

TEST(RoundSimple, Examples) {
  EXPECT_TRUE(is_round(fixtures::round_example()));
  EXPECT_FALSE(is_round(fixtures::hyperbolic_plane()));
  EXPECT_TRUE(is_simple(of_form(IntMatrix::identity(2))));
  EXPECT_FALSE(is_simple(fixtures::round_example()));
}

TEST(Padding, IsRoundAndSimple) {
  for (int i = 0; i < 20; ++i) {
    Rng rng(50, i);
    const int n = 4 * static_cast<int>(rng.uniform(1, 2));
    const SymmetricComplex p = padding(random_contractible(rng, n, 3).complex, n);
    EXPECT_TRUE(is_round(p));
    EXPECT_EQ(signature(p), 0);
    EXPECT_TRUE(is_simple(p));
  }
  EXPECT_THROW(padding(SignedComplex::free({1}), 0), NotAcyclic);
}

TEST(Invariants, EtaFlipAndBasisChange) {
  for (int i = 0; i < 40; ++i) {
    Rng rng(51, i);
    const SymmetricComplex x = random_symmetric(rng, 8, 2);
    const Z2 t = tau_new_symmetric(x);
    const long long s = signature(x);
    EXPECT_EQ(tau_new_symmetric(flip_eta(x)), t);
    const int q = static_cast<int>(rng.uniform(0, x.n()));
    const SymmetricComplex y = basis_change(x, q, random_unimodular(rng, x.complex().rank(q), 8).p);
    EXPECT_EQ(tau_new_symmetric(y), t);
    EXPECT_EQ(signature(y), s);
    EXPECT_EQ(mod(static_cast<long long>(x.n()) * (x.n() + 1) / 2 * euler_char(x.complex()), 2), 0);
  }
}

TEST(Invariants, BasisChangeRejectsWrongShape) {
  EXPECT_THROW(basis_change(fixtures::hyperbolic_plane(), 0, IntMatrix::identity(3)), ShapeMismatch);
}
