#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "compute.hpp"
#include "fixtures.hpp"

namespace tl {

struct SuiteConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t max_rank = 8;
  int max_degree = 8;
};

struct SuiteFailure {
  std::size_t trial = 0;
  std::string check;
  json counterexample;  // a standalone document
  std::string replay;   // the compute invocation that re-evaluates it
  std::string expected, actual;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::size_t checks = 0;
  std::vector<SuiteFailure> failures;
  double elapsed_seconds = 0;

  bool pass() const { return failures.empty(); }

  json to_json(bool with_timing = true) const {
    json f = json::array();
    for (auto& x : failures)
      f.push_back({{"trial", x.trial}, {"seed", config.seed}, {"check", x.check}, {"counterexample", x.counterexample},
                   {"replay", x.replay}, {"expected", x.expected}, {"actual", x.actual}});
    json j{{"suite", suite},
           {"trials", config.trials},
           {"seed", config.seed},
           {"bounds", {{"max_rank", config.max_rank}, {"max_degree", config.max_degree}}},
           {"checks", checks},
           {"failures", f},
           {"pass", pass()},
           {"version", kVersion}};
    if (with_timing) j["elapsed_seconds"] = elapsed_seconds;
    return j;
  }
};

// collects checks for one trial; the counterexample is whatever instance the trial last declared
class Trial {
 public:
  Trial(SuiteReport& r, std::size_t index) : r_(r), index_(index) {}

  void instance(json doc, std::string replay) {
    doc_ = std::move(doc);
    replay_ = std::move(replay);
  }
  const json& instance_document() const { return doc_; }
  const std::string& replay() const { return replay_; }

  template <class A, class B>
  void equal(const std::string& check, const A& expected, const B& actual) {
    ++r_.checks;
    if (!(expected == actual)) fail(check, str(expected), str(actual));
  }
  void holds(const std::string& check, bool ok, const std::string& detail = "") {
    ++r_.checks;
    if (!ok) fail(check, "true", detail.empty() ? "false" : detail);
  }
  void fail(const std::string& check, std::string expected, std::string actual) {
    r_.failures.push_back({index_, check, doc_, replay_, std::move(expected), std::move(actual)});
  }

 private:
  template <class T>
  static std::string str(const T& x) {
    if constexpr (std::is_same_v<T, Z2>) return std::to_string(x.bit);
    else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
    else if constexpr (std::is_arithmetic_v<T>) return std::to_string(x);
    else return json(x).dump();
  }

  SuiteReport& r_;
  std::size_t index_;
  json doc_;
  std::string replay_;
};

namespace suites {

inline constexpr std::size_t kProductTrials = 300;

inline int cap(int x, int hi) { return std::max(0, std::min(x, hi)); }

inline void signmod4(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t i) {
  const SymmetricComplex x =
      i == 0 ? fixtures::round_example() : random_symmetric(rng, std::min<std::size_t>(c.max_rank, 8), cap(c.max_degree / 4, 2));
  t.instance(document("symmetric", x), "tl compute tau-sym; tl compute sign");
  const CongruenceReport r = check_signmod4(x);
  t.equal("sign = 2 tau + (2k+1) chi mod 4", r.rhs, r.lhs);
  if (euler_char(x.complex()) == 0 && tau_new_symmetric(x) == 0)
    t.equal("simple round complexes have sign = 0 mod 4", 0LL, mod(signature(x), 4));
}

inline void det_mod4(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t) {
  const UnimodularForm h(random_form(rng, std::max<std::size_t>(1, c.max_rank)));
  t.instance(document(h, 0), "tl compute sign; tl compute tau-sym");
  const CongruenceReport r = check_det_mod4(h);
  t.equal("sign = rank + det - 1 mod 4", r.rhs, r.lhs);
  const long long d = det(h.matrix()) == 1 ? 1 : -1;
  const Z2 tau = tau_new_symmetric(form_to_complex(h, 0));
  t.equal("2 tau = det - 1 mod 4", mod(d - 1, 4), mod(2 * tau.bit, 4));
}

inline void mod8(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t) {
  const UnimodularForm h(random_even_form(rng, cap(static_cast<int>(c.max_rank) / 4, 3) + (c.max_rank < 4)));
  t.instance(document(h, 0), "tl compute sign");
  t.equal("even unimodular signature = 0 mod 8", 0LL, check_mod8_even(h).lhs);
}

inline void torsion_axioms(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t) {
  const int deg = std::max(1, cap(c.max_degree, 4));
  const int atoms = std::max(1, static_cast<int>(c.max_rank) / 2);
  const SignedComplex a = random_complex(rng, deg, atoms);
  const ChainMap f = random_equivalence(rng, a, atoms);
  t.instance(document("map", f), "tl compute tau-map");
  const ChainMap g = random_equivalence(rng, f.target(), atoms);
  const Z2 tf = tau_new_map(f), tg = tau_new_map(g);
  t.instance(document("map", compose(g, f)), "tl compute tau-map");
  t.equal("tau(g f) = tau(f) + tau(g)", tf + tg, tau_new_map(compose(g, f)));

  const ChainMap f2 = random_equivalence(rng, random_complex(rng, deg, atoms), atoms);
  t.instance(document("map", direct_sum(f, f2)), "tl compute tau-map");
  t.equal("tau(f + f') = tau(f) + tau(f')", tf + tau_new_map(f2), tau_new_map(direct_sum(f, f2)));

  const ChainMap h = random_homotopic(rng, f);
  t.instance(document("map", h), "tl compute tau-map");
  auto w = find_homotopy(f, h);
  t.holds("homotopy recovered", w.has_value() && is_homotopy(f, h, *w));
  t.equal("tau(f) = tau(f') for homotopic f, f'", tf, tau_new_map(h));

  const TrackedComplex tc = random_contractible(rng, deg, atoms);
  t.instance(document("complex", tc.complex), "tl compute tau");
  t.equal("tracked contractible torsion", tc.expected, torsion_contractible(tc.complex));
  const TrackedMap ti = random_isomorphism(rng, a);
  t.instance(document("map", ti.map), "tl compute tau-map");
  t.equal("tracked isomorphism torsion", ti.expected, tau_new_map(ti.map));
  t.equal("isomorphism formula", ti.expected, tau_iso(ti.map));
}

// pair of small symmetric complexes shared by the product and filtered-dual suites
inline std::pair<SymmetricComplex, SymmetricComplex> product_pair(Rng& rng, const SuiteConfig& c, std::size_t i) {
  if (i == 0) return {fixtures::unit(), fixtures::hyperbolic_plane()};
  const std::size_t r = std::min<std::size_t>(c.max_rank, 3);
  const int k = cap(c.max_degree / 8, 1);
  SymmetricComplex x = random_symmetric(rng, r, k);
  SymmetricComplex y = random_symmetric(rng, r, k);
  return {x, y};
}

inline void product_formula(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t i) {
  auto [x, y] = product_pair(rng, c, i);
  const SymmetricComplex z = tensor_symmetric(x, y);
  t.instance(document("symmetric", z), "tl compute tau-sym; tl compute sign");
  const Z2 tx = tau_new_symmetric(x), ty = tau_new_symmetric(y), tz = tau_new_symmetric(z);
  const long long cx = euler_char(x.complex()), cy = euler_char(y.complex());
  t.equal("tau(X (x) Y) = chi(X) tau(Y) + chi(Y) tau(X)", Z2::of(cx) * ty + Z2::of(cy) * tx, tz);
  if (i == 0) t.equal("tau(<1> (x) H) = 1", Z2(1), tz);
  if (x.n() % 4 == 0 && y.n() % 4 == 0)
    t.equal("sign(X (x) Y) = sign(X) sign(Y)", signature(x) * signature(y), signature(z));
  const FilteredComplex f = tensor_filtered(x.complex(), y.complex());
  t.instance(document("filtered", f), "tl compute theta --dim " + std::to_string(y.n()));
  t.equal("tau(theta) = 0", Z2(0), tau_new_map(theta_map(f, y.n())));
  t.holds("graded of dual = dual of graded", kdual_holds(f, y.n()));
}

inline void filtered_dual_suite(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t i) {
  const int n = static_cast<int>(rng.uniform(0, cap(c.max_degree, 3)));
  const int k = static_cast<int>(rng.uniform(0, cap(c.max_degree, 2)));
  const FilteredComplex f = random_admissible(rng, n, k, std::max(1, static_cast<int>(c.max_rank) / 2));
  t.instance(document("filtered", f), "tl compute theta --dim " + std::to_string(n));
  const ChainMap th = theta_map(f, n);
  t.equal("tau(theta) = 0", Z2(0), tau_new_map(th));
  t.holds("graded of dual = dual of graded", kdual_holds(f, n));
  const FilteredComplex fd = filtered_dual(f, n);
  t.holds("dual block ranks mirror", [&] {
    for (int r = 0; r <= n + k; ++r)
      for (int s = 0; s <= k; ++s)
        if (fd.rank(r, s) != f.rank(n + k - r, k - s)) return false;
    return true;
  }());
  // the tensor filtrations of the product suite, regenerated from the same streams; trial i covers
  // product trials i, i + trials, ... so a run here sees every pair of a product run of up to
  // max(trials, kProductTrials) trials with the same seed and bounds
  for (std::size_t j = i; j < std::max<std::size_t>(c.trials, kProductTrials); j += std::max<std::size_t>(c.trials, 1)) {
    Rng prng(c.seed, j);
    auto [x, y] = product_pair(prng, c, j);
    const FilteredComplex tf = tensor_filtered(x.complex(), y.complex());
    t.instance(document("filtered", tf), "tl compute theta --dim " + std::to_string(y.n()));
    t.equal("tau(theta) = 0 on tensor filtration", Z2(0), tau_new_map(theta_map(tf, y.n())));
    t.holds("tensor kdual", kdual_holds(tf, y.n()));
    const FilteredComplex td = tensor_filtered(x.phi0().source(), y.phi0().source());
    t.holds("dual of tensor filtration = tensor of duals", filtered_dual(tf, y.n()) == td);
  }
}

inline void invariance(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t i) {
  const int deg = std::max(1, cap(c.max_degree, 3));
  const int atoms = std::max(1, cap(static_cast<int>(c.max_rank) / 2, 3));
  // filtered contractible: cones of identities, tensor constructions, atom sums
  FilteredComplex fc;
  switch (i % 3) {
    case 0: {
      FilteredComplex base = random_filtered(rng, static_cast<int>(rng.uniform(0, 2)), deg, atoms, false);
      fc = filtered_cone(filtered_identity(base));
      break;
    }
    case 1: {
      const SignedComplex a = random_contractible(rng, deg, atoms).complex;
      const SignedComplex b = random_complex(rng, 2, 2);
      fc = tensor_filtered(a, b);
      break;
    }
    default:
      fc = random_filtered(rng, static_cast<int>(rng.uniform(0, 3)), deg, atoms + 1, true);
  }
  t.instance(document("filtered", fc), "tl compute tau; tl compute graded");
  const InvarianceReport r1 = check_invariance1(fc);
  t.equal("tau(C) = tau(G_*(C))", r1.lhs, r1.rhs);

  // filtered equivalence: inclusion into F + E followed by a filtered change of basis
  const int k = static_cast<int>(rng.uniform(0, 2));
  const FilteredComplex a = random_filtered(rng, k, deg, atoms, false);
  const FilteredComplex e = random_filtered(rng, k, deg, std::max(1, atoms - 1), true);
  const FilteredMap inc = filtered_inclusion(a, e);
  Z2 det_sign;
  const auto p = random_filtered_automorphism(rng, inc.target(), &det_sign);
  const FilteredMap bc = filtered_basis_change(inc.target(), p, random_signs(rng, inc.target()).piece_signs(), rng.bit());
  const FilteredMap f = compose(bc, inc);
  t.instance(document("filtered", filtered_cone(f)), "tl compute graded");
  const InvarianceReport r2 = check_invariance2(f);
  t.equal("tau(f) = tau(G_*(f))", r2.lhs, r2.rhs);
  const ChainMap bct = total_map(bc);
  const Z2 recorded = det_sign + bct.source().eta() + bct.target().eta();
  const InvarianceReport r3 = check_invariance2(bc);
  t.equal("basis change: tau(f) = recorded", recorded, r3.lhs);
  t.equal("basis change: tau(G_*(f)) = recorded", recorded, r3.rhs);
  t.equal("tau(rho) = 0", Z2(0), tau_new_map(rearrangement_rho(f)));
}

inline void fixture_suite(Rng&, const SuiteConfig&, Trial& t, std::size_t) {
  auto run = [&](const std::string& cmd, const json& doc) { return compute_value(cmd, validate_document(doc)); };
  t.instance(document("symmetric", fixtures::hyperbolic_plane()), "tl compute tau-sym");
  t.equal("tau-sym H = 1", json(1), run("tau-sym", document("symmetric", fixtures::hyperbolic_plane())));
  t.equal("tau-sym <1> = 0", json(0), run("tau-sym", document("symmetric", fixtures::unit())));
  t.equal("sign E8 = 8", json(8), run("sign", document(fixtures::e8_form(), 0)));
  t.equal("sign diag(1,-1) = 0", json(0), run("sign", document(fixtures::diag_form({1, -1}), 0)));
  const json round = document("symmetric", fixtures::round_example());
  t.instance(round, "tl compute chi; tl compute tau-sym; tl compute sign");
  t.equal("chi round = 0", json(0), run("chi", round));
  t.equal("tau-sym round = 1", json(1), run("tau-sym", round));
  t.equal("sign round = 2", json(2), run("sign", round));
}

inline void invariants(Rng& rng, const SuiteConfig& c, Trial& t, std::size_t) {
  const SymmetricComplex x = random_symmetric(rng, std::min<std::size_t>(c.max_rank, 8), cap(c.max_degree / 4, 2));
  t.instance(document("symmetric", x), "tl compute tau-sym; tl compute sign");
  const Z2 tau = tau_new_symmetric(x);
  const long long sign = signature(x);
  const long long chi = euler_char(x.complex());
  const SymmetricComplex y = flip_eta(x);
  t.equal("tau unchanged by eta flip", tau, tau_new_symmetric(y));
  t.equal("sign unchanged by eta flip", sign, signature(y));
  const int q = static_cast<int>(rng.uniform(0, x.n()));
  const SymmetricComplex z = basis_change(x, q, random_unimodular(rng, x.complex().rank(q), 8).p);
  t.equal("tau unchanged by basis change", tau, tau_new_symmetric(z));
  t.equal("sign unchanged by basis change", sign, signature(z));
  t.equal("tau(-X) = tau(X) + chi", tau + Z2::of(chi), tau_new_symmetric(negate(x)));
  t.equal("n(n+1)/2 chi even", 0LL, mod(static_cast<long long>(x.n()) * (x.n() + 1) / 2 * chi, 2));
}

using SuiteFn = std::function<void(Rng&, const SuiteConfig&, Trial&, std::size_t)>;

inline const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r{
      {"signmod4", signmod4},       {"det-mod4", det_mod4},
      {"mod8", mod8},               {"torsion-axioms", torsion_axioms},
      {"product-formula", product_formula}, {"invariance", invariance},
      {"filtered-dual", filtered_dual_suite}, {"fixtures", fixture_suite},
      {"invariants", invariants}};
  return r;
}

}  // namespace suites

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (auto& [k, v] : suites::registry()) out.push_back(k);
  return out;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  auto it = suites::registry().find(name);
  if (it == suites::registry().end()) throw UnknownSuite("no suite named '" + name + "'");
  SuiteReport report;
  report.suite = name;
  report.config = config;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed, i);
    Trial t(report, i);
    try {
      it->second(rng, config, t, i);
    } catch (const Error& e) {
      t.fail("no error", "ok", e.what());
    }
  }
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace tl
