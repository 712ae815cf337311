#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace tl;

namespace {

IntMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, long long lo = -4, long long hi = 4) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

// rank deficient by construction
IntMatrix random_low_rank(Rng& rng, std::size_t r, std::size_t c, std::size_t k) {
  return random_matrix(rng, r, k, -3, 3) * random_matrix(rng, k, c, -3, 3);
}

void expect_hnf_contract(const IntMatrix& m) {
  const Hnf f = hnf(m);
  EXPECT_EQ(f.u * m, f.h);
  EXPECT_EQ(abs(det(f.u)), 1);
  for (std::size_t i = 0; i < f.rank; ++i) {
    const std::size_t pc = f.pivots[i];
    EXPECT_GT(f.h(i, pc), 0);
    for (std::size_t j = 0; j < pc; ++j) EXPECT_EQ(f.h(i, j), 0);
    for (std::size_t a = 0; a < i; ++a) {
      EXPECT_GE(f.h(a, pc), 0);
      EXPECT_LT(f.h(a, pc), f.h(i, pc));
    }
    if (i) EXPECT_GT(pc, f.pivots[i - 1]);
  }
  for (std::size_t i = f.rank; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) EXPECT_EQ(f.h(i, j), 0);
}

}  // namespace

TEST(Hnf, IdentityIsFixed) {
  const Hnf f = hnf(IntMatrix::identity(3));
  EXPECT_EQ(f.h, IntMatrix::identity(3));
  EXPECT_EQ(f.u, IntMatrix::identity(3));
}

TEST(Hnf, TwoByTwo) {
  const IntMatrix m{{2, 4}, {1, 3}};
  expect_hnf_contract(m);
  EXPECT_EQ(hnf(m).rank, 2u);
}

TEST(Hnf, ZeroMatrix) {
  const Hnf f = hnf(IntMatrix(2, 3));
  EXPECT_TRUE(f.h.is_zero());
  EXPECT_EQ(f.u, IntMatrix::identity(2));
  EXPECT_EQ(f.rank, 0u);
}

TEST(Hnf, RandomContract) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(11, i);
    const std::size_t r = rng.uniform(1, 5), c = rng.uniform(1, 5);
    expect_hnf_contract(i % 2 ? random_matrix(rng, r, c) : random_low_rank(rng, r, c, rng.uniform(1, 2)));
  }
}

TEST(Snf, DiagonalNormalises) {
  const Snf f = snf(IntMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(abs(f.s(0, 0)), 1);
  EXPECT_EQ(abs(f.s(1, 1)), 6);
  EXPECT_EQ(invariant_factors(IntMatrix{{2, 0}, {0, 3}}), (std::vector<Integer>{1, 6}));
}

TEST(Snf, IdentityAndZero) {
  EXPECT_EQ(snf(IntMatrix::identity(3)).s, IntMatrix::identity(3));
  EXPECT_EQ(snf(IntMatrix{{0}}).s, IntMatrix{{0}});
}

TEST(Snf, ReassemblyAndDeterminantalDivisors) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(12, i);
    const std::size_t r = rng.uniform(1, 4), c = rng.uniform(1, 4);
    const IntMatrix m = i % 3 ? random_matrix(rng, r, c) : random_low_rank(rng, r, c, 1);
    const Snf f = snf(m);
    EXPECT_EQ(inverse_unimodular(f.u) * f.s * inverse_unimodular(f.v), m);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < c; ++b)
        if (a != b) EXPECT_EQ(f.s(a, b), 0);
    std::vector<Integer> got = invariant_factors(m);
    for (auto& x : got) x = abs(x);
    for (std::size_t a = 1; a < got.size(); ++a) EXPECT_EQ(got[a] % got[a - 1], 0);
    EXPECT_EQ(got, oracle::determinantal_factors(m)) << "trial " << i;
  }
}

TEST(UnitDet, Examples) {
  EXPECT_EQ(unit_det(IntMatrix{{0, 1}, {1, 0}}), Z2(1));
  EXPECT_EQ(unit_det(IntMatrix::identity(4)), Z2(0));
  EXPECT_THROW(unit_det(IntMatrix{{2}}), NotAUnit);
  EXPECT_EQ(unit_det(IntMatrix(0, 0)), Z2(0));
}

TEST(UnitDet, MultiplicativeOnUnimodulars) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(13, i);
    const std::size_t n = rng.uniform(1, 6);
    const auto p = random_unimodular(rng, n, 10), q = random_unimodular(rng, n, 10);
    EXPECT_EQ(unit_det(p.p), p.det);
    EXPECT_EQ(unit_det(p.p * q.p), unit_det(p.p) + unit_det(q.p));
  }
}

TEST(Det, AgreesWithPermutationExpansion) {
  for (int i = 0; i < 40; ++i) {
    Rng rng(14, i);
    const std::size_t n = rng.uniform(1, 6);
    const IntMatrix m = random_matrix(rng, n, n, -9, 9);
    EXPECT_EQ(det(m), oracle::leibniz_det(m));
  }
}

TEST(KernelBasis, Examples) {
  const IntMatrix k = kernel_basis(IntMatrix{{1, 1}});
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_TRUE((IntMatrix{{1, 1}} * k).is_zero());
  EXPECT_EQ(abs(k(0, 0)), 1);
  EXPECT_EQ(kernel_basis(IntMatrix::identity(3)).cols(), 0u);
  const IntMatrix z = kernel_basis(IntMatrix(2, 2));
  EXPECT_EQ(z.cols(), 2u);
  EXPECT_EQ(abs(det(z)), 1);
}

TEST(KernelBasis, RandomKernelsAreSaturated) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(15, i);
    const std::size_t r = rng.uniform(1, 4), c = rng.uniform(1, 6);
    const IntMatrix m = random_low_rank(rng, r, c, rng.uniform(1, 3));
    const IntMatrix k = kernel_basis(m);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(k.cols(), c - rank(m));
    EXPECT_EQ(k.cols(), c - rank_q(to_rational(m)));
    // a primitive lattice: every invariant factor is 1
    for (auto& x : invariant_factors(k)) EXPECT_EQ(abs(x), 1);
  }
}

TEST(SolveIntegral, Examples) {
  const IntMatrix b{{3, -1}, {7, 2}};
  EXPECT_EQ(solve_integral(IntMatrix::identity(2), b), b);
  EXPECT_THROW(solve_integral(IntMatrix{{2}}, IntMatrix{{1}}), NoIntegerSolution);
  const IntMatrix m{{1, 0}};
  const IntMatrix x = solve_integral(m, IntMatrix{{5}});
  EXPECT_EQ(m * x, IntMatrix{{5}});
}

TEST(SolveIntegral, SubstituteBack) {
  for (int i = 0; i < 60; ++i) {
    Rng rng(16, i);
    const std::size_t r = rng.uniform(1, 4), c = rng.uniform(1, 5);
    const IntMatrix m = random_matrix(rng, r, c);
    const IntMatrix x0 = random_matrix(rng, c, 2);
    const IntMatrix x = solve_integral(m, m * x0);
    EXPECT_EQ(m * x, m * x0);
  }
}

TEST(Inertia, Examples) {
  auto in = [](const IntMatrix& m) { return inertia(to_rational(m)); };
  const Inertia a = in(IntMatrix::identity(2));
  EXPECT_EQ(a.pos, 2u);
  EXPECT_EQ(a.neg, 0u);
  const Inertia h = in(IntMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(h.pos, 1u);
  EXPECT_EQ(h.neg, 1u);
  EXPECT_EQ(h.zero, 0u);
  EXPECT_EQ(in(IntMatrix(2, 2)).zero, 2u);
  EXPECT_THROW(in(IntMatrix{{0, 1}, {2, 0}}), NotSymmetric);
}

TEST(Inertia, CongruenceInvariantAndMatchesDescartes) {
  for (int i = 0; i < 40; ++i) {
    Rng rng(17, i);
    const std::size_t n = rng.uniform(1, 5);
    IntMatrix a = random_matrix(rng, n, n);
    a = a + a.transpose();
    if (i % 4 == 0) a = random_low_rank(rng, n, n, 1), a = a * a.transpose();
    const Inertia x = inertia(to_rational(a));
    const Inertia o = oracle::descartes_inertia(a);
    EXPECT_EQ(x.pos, o.pos) << "trial " << i;
    EXPECT_EQ(x.neg, o.neg);
    EXPECT_EQ(x.zero, o.zero);
    // rational congruence by an invertible integer matrix
    IntMatrix g = random_matrix(rng, n, n);
    if (det(g) == 0) g = random_unimodular(rng, n).p;
    const Inertia y = inertia(to_rational(g.transpose() * a * g));
    EXPECT_EQ(x.pos, y.pos);
    EXPECT_EQ(x.neg, y.neg);
  }
}

TEST(Rational, StaysNormalised) {
  RatMatrix r = to_rational(IntMatrix{{2, 4}, {6, -8}});
  const oracle::Rational x = r(0, 1) / r(1, 1);
  EXPECT_EQ(numerator(x), -1);
  EXPECT_EQ(denominator(x), 2);
}
