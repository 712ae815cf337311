#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace tl;

namespace {

SignedComplex z_in(int degree, Z2 eta = 0) {
  std::vector<std::size_t> ranks(degree + 1, 0);
  ranks[degree] = 1;
  return SignedComplex::free(ranks, eta);
}

// blockwise swap C + D -> D + C
ChainMap swap_map(const SignedComplex& c, const SignedComplex& d) {
  const SignedComplex cd = direct_sum(c, d), dc = direct_sum(d, c);
  std::vector<IntMatrix> m;
  for (int r = 0; r <= cd.top(); ++r) {
    BlockBuilder b({d.rank(r), c.rank(r)}, {c.rank(r), d.rank(r)});
    b.set(0, 1, IntMatrix::identity(d.rank(r)));
    b.set(1, 0, IntMatrix::identity(c.rank(r)));
    m.push_back(b.matrix());
  }
  return ChainMap(cd, dc, m);
}

ChainMap identity_between(const SignedComplex& a, const SignedComplex& b) {
  std::vector<IntMatrix> m;
  for (int r = 0; r <= a.top(); ++r) m.push_back(IntMatrix::identity(a.rank(r)));
  return ChainMap(a, b, m);
}

}  // namespace

TEST(Complex, RejectsNonComplexes) {
  EXPECT_THROW(SignedComplex({1, 1, 1}, {IntMatrix{{1}}, IntMatrix{{1}}}), NotAComplex);
  EXPECT_THROW(SignedComplex({1, 2}, {IntMatrix{{1}}}), ShapeMismatch);
}

TEST(EulerChar, Examples) {
  EXPECT_EQ(euler_char(z_in(0)), 1);
  EXPECT_EQ(euler_char(elementary(1, 1, 1)), 0);
  EXPECT_EQ(euler_char(SignedComplex::free({1, 2, 2, 2, 1})), 0);
}

TEST(Suspension, Examples) {
  const SignedComplex s = suspension(z_in(0));
  EXPECT_EQ(s.rank(0), 0u);
  EXPECT_EQ(s.rank(1), 1u);
  EXPECT_EQ(s.eta(), Z2(0));
  EXPECT_EQ(suspension(z_in(0, 1)).eta(), Z2(1));
}

TEST(Epsilon, Examples) {
  EXPECT_EQ(epsilon(1, 1), Z2(1));
  EXPECT_EQ(epsilon(2, 3), Z2(0));
  EXPECT_EQ(epsilon(3, 5), Z2(1));
}

TEST(Beta, Examples) {
  EXPECT_EQ(beta(z_in(0), z_in(0)), Z2(0));
  EXPECT_EQ(beta(z_in(2), z_in(0)), Z2(1));
  EXPECT_EQ(beta(z_in(0), z_in(2)), Z2(0));
  EXPECT_EQ(beta(SignedComplex::free({0, 0, 3}), SignedComplex::free({0, 0, 3})), Z2(0));
}

TEST(DirectSum, Examples) {
  const SignedComplex c = elementary(2, 2, -1, 1);
  EXPECT_EQ(direct_sum(c, SignedComplex()), c);
  EXPECT_EQ(direct_sum(z_in(1), z_in(0)).eta(), Z2(1));
  EXPECT_EQ(direct_sum(z_in(0), z_in(1)).eta(), Z2(0));
}

TEST(MappingCone, Examples) {
  const SignedComplex c = z_in(0);
  const SignedComplex cone = mapping_cone(identity_map(c));
  EXPECT_EQ(cone.ranks(), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(cone.d(1), IntMatrix{{1}});
  EXPECT_TRUE(is_acyclic(cone));

  Rng rng(21, 0);
  const SignedComplex a = random_complex(rng, 3, 3).with_eta(1);
  const SignedComplex zero = SignedComplex::free(std::vector<std::size_t>(a.top() + 1, 0));
  EXPECT_EQ(mapping_cone(ChainMap(a, zero, {})), suspension(a));
}

TEST(MappingCone, ConeOfIdentityIsAcyclic) {
  for (int i = 0; i < 30; ++i) {
    Rng rng(22, i);
    const SignedComplex c = random_complex(rng, 4, 4);
    EXPECT_TRUE(is_acyclic(mapping_cone(identity_map(c))));
  }
}

TEST(Dual, AlphaCorrectionOnMiddleDegree) {
  // Z^m in degree 2k, n = 4k with k odd: the alpha term is m, beta vanishes
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<std::size_t> ranks(3, 0);
    ranks[2] = m;
    const SignedComplex c = SignedComplex::free(ranks);
    EXPECT_EQ(dual_complex(c, 4).eta(), c.eta() + Z2::of(euler_char(c)));
  }
}

TEST(Dual, ElementaryInDimensionOne) {
  const SignedComplex d = dual_complex(elementary(1, 1, 1), 1);
  EXPECT_EQ(d.d(1), IntMatrix{{-1}});
  // beta vanishes, alpha_1 counts rank C_0 = 1
  EXPECT_EQ(d.eta(), Z2(1));
}

TEST(Dual, RandomDualsAreComplexes) {
  for (int i = 0; i < 30; ++i) {
    Rng rng(23, i);
    const SignedComplex c = random_complex(rng, 4, 4);
    const int n = c.top() + static_cast<int>(rng.uniform(0, 2));
    const SignedComplex d = dual_complex(c, n);
    EXPECT_EQ(d.top(), n);
    for (int r = 0; r <= n; ++r) EXPECT_EQ(d.rank(r), c.rank(n - r));
    EXPECT_EQ(euler_char(d), (n % 2 ? -1 : 1) * euler_char(c));
  }
}

TEST(Alpha, Examples) {
  EXPECT_EQ(alpha_n(SignedComplex::free({0, 0, 2}), 4), Z2(0));
  EXPECT_EQ(alpha_n(SignedComplex::free({0, 0, 1}), 0), Z2(1));
  EXPECT_EQ(alpha_n(SignedComplex(), 3), Z2(0));
}

TEST(FindHomotopy, Examples) {
  Rng rng(24, 0);
  const SignedComplex c = random_complex(rng, 3, 4);
  const ChainMap id = identity_map(c);
  auto g = find_homotopy(id, id);
  ASSERT_TRUE(g.has_value());
  EXPECT_TRUE(is_homotopy(id, id, *g));

  const SignedComplex z = z_in(0);
  EXPECT_FALSE(find_homotopy(identity_map(z), ChainMap(z, z, {IntMatrix{{0}}})).has_value());
}

TEST(FindHomotopy, RecoversPlantedHomotopies) {
  for (int i = 0; i < 25; ++i) {
    Rng rng(25, i);
    const SignedComplex c = random_complex(rng, 3, 3);
    const ChainMap f = random_equivalence(rng, c, 2);
    const ChainMap f2 = random_homotopic(rng, f);
    auto g = find_homotopy(f, f2);
    ASSERT_TRUE(g.has_value()) << "trial " << i;
    EXPECT_TRUE(is_homotopy(f, f2, *g));
  }
}

TEST(Homology, Examples) {
  const auto h0 = homology_ranks(z_in(0));
  EXPECT_EQ(h0[0].free_rank, 1u);
  for (auto& g : homology_ranks(elementary(1, 1, 1))) EXPECT_TRUE(g.zero());
  const auto h2 = homology_ranks(elementary(1, 1, 2));
  EXPECT_EQ(h2[0].free_rank, 0u);
  EXPECT_EQ(h2[0].torsion, (std::vector<Integer>{2}));
  EXPECT_TRUE(h2[1].zero());
}

TEST(Homology, EulerCharacteristicOfHomology) {
  for (int i = 0; i < 30; ++i) {
    Rng rng(26, i);
    const SignedComplex c = random_complex(rng, 4, 5);
    long long chi = 0;
    const auto h = homology_ranks(c);
    for (int r = 0; r <= c.top(); ++r) chi += (r % 2 ? -1 : 1) * static_cast<long long>(h[r].free_rank);
    EXPECT_EQ(chi, euler_char(c));
  }
}

TEST(SignBookkeeping, SwapIsCoherent) {
  for (int i = 0; i < 30; ++i) {
    Rng rng(27, i);
    const SignedComplex c = random_complex(rng, 3, 3).with_eta(rng.bit());
    const SignedComplex d = random_complex(rng, 3, 3).with_eta(rng.bit());
    const ChainMap s = swap_map(c, d), t = swap_map(d, c);
    EXPECT_EQ(tau_new_map(compose(t, s)), Z2(0));
    EXPECT_EQ(tau_new_map(s) + tau_new_map(t), Z2(0));
    // the swap of blocks of sizes a, b has determinant (-1)^{ab}
    Z2 expected = direct_sum(c, d).eta() + direct_sum(d, c).eta();
    for (int r = 0; r <= std::max(c.top(), d.top()); ++r) expected += epsilon(c.rank(r), d.rank(r));
    EXPECT_EQ(tau_new_map(s), expected);
  }
}

TEST(SignBookkeeping, RebracketingIsSimple) {
  for (int i = 0; i < 30; ++i) {
    Rng rng(28, i);
    const SignedComplex a = random_complex(rng, 3, 3).with_eta(rng.bit());
    const SignedComplex b = random_complex(rng, 3, 3).with_eta(rng.bit());
    const SignedComplex c = random_complex(rng, 3, 3).with_eta(rng.bit());
    const SignedComplex left = direct_sum(direct_sum(a, b), c), right = direct_sum(a, direct_sum(b, c));
    EXPECT_EQ(left.eta(), right.eta());
    EXPECT_EQ(tau_new_map(identity_between(left, right)), Z2(0));
  }
}
