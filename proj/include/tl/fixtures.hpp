#pragma once

#include "random.hpp"

namespace tl::fixtures {

inline SymmetricComplex unit() { return form_to_complex(UnimodularForm(IntMatrix{{1}}), 0); }
inline SymmetricComplex hyperbolic_plane() { return form_to_complex(UnimodularForm(hyperbolic()), 0); }
inline UnimodularForm e8_form() { return UnimodularForm(e8()); }
inline UnimodularForm diag_form(const std::vector<long long>& signs) {
  std::vector<Integer> d(signs.begin(), signs.end());
  return UnimodularForm(IntMatrix::diagonal(d));
}

// ranks (1,2,2,2,1), zero differentials, n = 4, phi_0 the identity in every degree
// (so the middle pairing is <1> + <1>)
inline SymmetricComplex round_example() {
  const std::vector<std::size_t> ranks{1, 2, 2, 2, 1};
  std::vector<IntMatrix> phi;
  for (auto r : ranks) phi.push_back(IntMatrix::identity(r));
  return SymmetricComplex(SignedComplex::free(ranks), 4, phi);
}

// 2-filtered tensor of the sphere-like complex Z + 0 + Z with the elementary complex Z -> Z
inline FilteredComplex tensor_example() {
  return tensor_filtered(SignedComplex::free({1, 0, 1}), elementary(1, 1, 1));
}

}  // namespace tl::fixtures
