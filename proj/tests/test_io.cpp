#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracle.hpp"

using namespace tl;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TL_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kFixtures{"unit.json",     "hyperbolic.json",  "e8.json",
                                         "diag_pos.json", "diag_neg.json",    "diag_pos_neg.json",
                                         "round_example.json", "tensor_2filtered.json"};

json symmetric_doc() { return document("symmetric", fixtures::hyperbolic_plane()); }

// splits "tl compute a; tl compute b --dim 3" into (command, dim) pairs
std::vector<std::pair<std::string, ComputeOptions>> replay_steps(const std::string& replay) {
  std::vector<std::pair<std::string, ComputeOptions>> out;
  std::stringstream all(replay);
  std::string part;
  while (std::getline(all, part, ';')) {
    std::stringstream words(part);
    std::string tl_, compute_, cmd, flag;
    words >> tl_ >> compute_ >> cmd;
    EXPECT_EQ(tl_, "tl");
    EXPECT_EQ(compute_, "compute");
    ComputeOptions o;
    if (words >> flag) {
      EXPECT_EQ(flag, "--dim");
      int n = -1;
      words >> n;
      o.dim = n;
    }
    out.push_back({cmd, o});
  }
  return out;
}

}  // namespace

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RoundTrip, Fixtures) {
  for (auto& name : kFixtures) {
    const json j = json::parse(slurp(name));
    const json v = validate_document(j);
    EXPECT_EQ(v, j) << name;
    EXPECT_EQ(validate_document(json::parse(v.dump())), v) << name;
  }
}

TEST(RoundTrip, FixturesMatchLibraryConstructions) {
  EXPECT_EQ(symmetric_from_json(json::parse(slurp("hyperbolic.json"))), fixtures::hyperbolic_plane());
  EXPECT_EQ(symmetric_from_json(json::parse(slurp("unit.json"))), fixtures::unit());
  EXPECT_EQ(symmetric_from_json(json::parse(slurp("round_example.json"))), fixtures::round_example());
  EXPECT_EQ(filtered_from_json(json::parse(slurp("tensor_2filtered.json"))), fixtures::tensor_example());
  EXPECT_EQ(form_from_json(json::parse(slurp("e8.json"))).form.matrix(), e8());
}

TEST(RoundTrip, GeneratedInstances) {
  for (int i = 0; i < 40; ++i) {
    Rng rng(51, i);
    const SignedComplex c = random_complex(rng, 4, 4).with_eta(rng.bit());
    EXPECT_EQ(complex_from_json(json::parse(document("complex", c).dump())), c);
    const ChainMap f = random_equivalence(rng, c, 2);
    EXPECT_EQ(map_from_json(json::parse(document("map", f).dump())), f);
    const SymmetricComplex x = random_symmetric(rng, 4, 2);
    EXPECT_EQ(symmetric_from_json(json::parse(document("symmetric", x).dump())), x);
    const FilteredComplex fc = random_filtered(rng, 2, 3, 3, i % 2);
    EXPECT_EQ(filtered_from_json(json::parse(document("filtered", fc).dump())), fc);
    const UnimodularForm h(random_form(rng, 6));
    const auto back = form_from_json(json::parse(document(h, i % 3).dump()));
    EXPECT_EQ(back.form.matrix(), h.matrix());
    EXPECT_EQ(back.k, i % 3);
  }
}

TEST(RoundTrip, LargeEntriesSurvive) {
  IntMatrix m(1, 1);
  m(0, 0) = Integer("-123456789012345678901234567890");
  EXPECT_EQ(matrix_from_json(json::parse(to_json(m).dump())), m);
}

TEST(Schema, Rejects) {
  json j = symmetric_doc();
  j.erase("n");
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["schema_version"] = 2;
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["kind"] = "bogus";
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["kind"] = 3;
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["phi0"][0]["entries"][0] = 0;  // numbers are not accepted
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["phi0"][0]["entries"][0] = "1x";
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["phi0"][0]["entries"].erase(0);
  EXPECT_THROW(validate_document(j), SchemaError);

  j = symmetric_doc();
  j["complex"]["eta"] = 2;
  EXPECT_THROW(validate_document(j), SchemaError);

  EXPECT_THROW(validate_document(json::array()), SchemaError);
  EXPECT_THROW(compute("chi", "{not json"), SchemaError);
}

TEST(Schema, DomainErrorsKeepTheirNames) {
  json j = document("complex", elementary(1, 1, 1));
  j["diffs"][0]["entries"][0] = "2";
  j["ranks"] = {1, 1, 1};
  j["diffs"].push_back(to_json(IntMatrix{{1}}));
  try {
    validate_document(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "NotAComplex");
  }
}

TEST(Compute, Fixtures) {
  auto run = [](const std::string& cmd, const std::string& file, ComputeOptions o = {}) {
    const std::string bytes = slurp(file);
    const json r = compute(cmd, bytes, o);
    EXPECT_EQ(r.at("input_sha256"), sha256_hex(bytes));
    EXPECT_EQ(r.at("command"), cmd);
    EXPECT_EQ(r.at("version"), kVersion);
    EXPECT_EQ(r.at("schema_version"), kSchemaVersion);
    return r.at("result");
  };
  EXPECT_EQ(run("tau-sym", "hyperbolic.json"), 1);
  EXPECT_EQ(run("sign", "e8.json"), 8);
  EXPECT_EQ(run("chi", "round_example.json"), 0);
  EXPECT_EQ(run("tau-sym", "round_example.json"), 1);
  EXPECT_EQ(run("sign", "round_example.json"), 2);
  EXPECT_EQ(run("tau-sym", "unit.json"), 0);
  EXPECT_EQ(run("sign", "diag_pos_neg.json"), 0);
  EXPECT_EQ(run("tau-sym", "diag_neg.json"), 1);
  EXPECT_EQ(run("chi", "tensor_2filtered.json"), euler_char(total_complex(fixtures::tensor_example())));
  const json g = run("graded", "tensor_2filtered.json");
  EXPECT_TRUE(g.at("square_witness_ok").get<bool>());
  ComputeOptions o;
  o.dim = 1;  // fibre dimension
  EXPECT_EQ(run("theta", "tensor_2filtered.json", o).at("tau"), 0);
}

TEST(Compute, DerivedDocumentsValidate) {
  const SignedComplex c = elementary(2, 2, -1, 1);
  ComputeOptions o;
  o.dim = 3;
  const json d = compute_value("dual", document("complex", c), o);
  EXPECT_EQ(complex_from_json(validate_document(d)), dual_complex(c, 3));

  const ChainMap f = identity_map(c);
  const json cone = compute_value("cone", document("map", f));
  EXPECT_EQ(complex_from_json(cone), mapping_cone(f));

  o = {};
  o.with = document("symmetric", fixtures::hyperbolic_plane());
  const json t = compute_value("tensor", document("symmetric", fixtures::unit()), o);
  EXPECT_EQ(compute_value("tau-sym", validate_document(t)), 1);

  const json a = compute_value("amalgamate", document("filtered", fixtures::tensor_example()));
  EXPECT_NO_THROW(validate_document(a));
}

TEST(Compute, UsageErrors) {
  EXPECT_THROW(compute_value("tau-map", symmetric_doc()), SchemaError);
  EXPECT_THROW(compute_value("dual", document("complex", elementary(1, 1, 1))), SchemaError);
  EXPECT_THROW(compute_value("tensor", symmetric_doc()), SchemaError);
  EXPECT_THROW(compute_value("bogus", symmetric_doc()), SchemaError);
  EXPECT_THROW(compute_value("tau", document("complex", elementary(1, 1, 2))), NotAcyclic);
}

TEST(RunSuite, Deterministic) {
  SuiteConfig c;
  c.trials = 1;
  c.seed = 7;
  c.max_rank = 4;
  c.max_degree = 4;
  const SuiteReport a = run_suite("signmod4", c), b = run_suite("signmod4", c);
  EXPECT_EQ(a.to_json(false), b.to_json(false));
  EXPECT_EQ(a.to_json(false).at("seed"), 7);
  EXPECT_TRUE(a.pass());
  EXPECT_GT(a.checks, 0u);
  c.seed = 8;
  EXPECT_EQ(run_suite("signmod4", c).to_json(false).at("seed"), 8);
}

TEST(RunSuite, UnknownSuite) { EXPECT_THROW(run_suite("bogus", SuiteConfig{}), UnknownSuite); }

TEST(RunSuite, DetMod4Passes) {
  SuiteConfig c;
  c.trials = 500;
  c.seed = 3;
  const SuiteReport r = run_suite("det-mod4", c);
  EXPECT_TRUE(r.pass()) << r.to_json().dump(2);
}

TEST(RunSuite, FailuresAreSerialized) {
  SuiteReport r;
  r.suite = "x";
  Trial t(r, 4);
  t.instance(symmetric_doc(), "tl compute tau-sym");
  t.equal("deliberate", Z2(0), Z2(1));
  const json j = r.to_json(false);
  ASSERT_EQ(j.at("failures").size(), 1u);
  const json& f = j.at("failures")[0];
  EXPECT_EQ(f.at("trial"), 4);
  EXPECT_EQ(f.at("expected"), "0");
  EXPECT_EQ(f.at("actual"), "1");
  EXPECT_EQ(validate_document(f.at("counterexample")), symmetric_doc());
  EXPECT_FALSE(j.at("pass").get<bool>());
}

// whatever a trial would report on failure must be a valid document its replay commands accept
TEST(RunSuite, CounterexamplesReplay) {
  SuiteConfig c;
  c.max_rank = 4;
  c.max_degree = 4;
  for (auto& name : suite_names()) {
    c.trials = 3;
    for (std::size_t i = 0; i < c.trials; ++i) {
      SuiteReport r;
      Rng rng(c.seed, i);
      Trial t(r, i);
      suites::registry().at(name)(rng, c, t, i);
      ASSERT_FALSE(t.replay().empty()) << name;
      const json doc = validate_document(t.instance_document());
      for (auto& [cmd, o] : replay_steps(t.replay())) EXPECT_NO_THROW(compute_value(cmd, doc, o)) << name << " " << cmd;
    }
  }
}
