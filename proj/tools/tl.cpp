#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tl/tl.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tl::SchemaError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

tl::json parse(const std::string& bytes) {
  try {
    return tl::json::parse(bytes);
  } catch (const tl::json::parse_error& e) {
    throw tl::SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

// exit 1 is reserved for suite failures; bad input of any kind is a usage error
int report_error(const tl::Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact torsion, signatures and filtered complexes over the integers"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check a document against the schema and its invariants");
  std::string validate_file;
  validate->add_option("file", validate_file, "input document")->required();

  auto* compute = app.add_subcommand("compute", "evaluate a command on a document");
  std::string command, compute_file, with_file;
  int dim = -1;
  compute->add_option("command", command, "chi, tau, tau-map, tau-sym, sign, cone, dual, tensor, graded, amalgamate, theta")
      ->required()
      ->check(CLI::IsMember(tl::compute_commands()));
  compute->add_option("file", compute_file, "input document")->required();
  compute->add_option("--dim", dim, "formal dimension for dual and theta");
  compute->add_option("--with", with_file, "second operand for tensor");

  auto* verify = app.add_subcommand("verify", "run a seeded property suite");
  std::string suite, report_path;
  tl::SuiteConfig config;
  verify->add_option("suite", suite, "suite name")->required();
  verify->add_option("--trials", config.trials, "number of trials");
  verify->add_option("--seed", config.seed, "master seed");
  verify->add_option("--max-rank", config.max_rank, "size bound for generated forms and complexes");
  verify->add_option("--max-degree", config.max_degree, "degree bound for generated complexes");
  verify->add_option("--report", report_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      const std::string bytes = slurp(validate_file);
      const tl::json doc = tl::validate_document(parse(bytes));
      std::cout << tl::json{{"valid", true}, {"kind", doc["kind"]}, {"input_sha256", tl::sha256_hex(bytes)}}.dump() << "\n";
      return 0;
    }
    if (*compute) {
      tl::ComputeOptions opt;
      if (dim >= 0) opt.dim = dim;
      if (!with_file.empty()) opt.with = parse(slurp(with_file));
      std::cout << tl::compute(command, slurp(compute_file), opt).dump(2) << "\n";
      return 0;
    }
    const tl::SuiteReport r = tl::run_suite(suite, config);
    const std::string out = r.to_json().dump(2);
    if (!report_path.empty()) {
      std::ofstream f(report_path);
      if (!f) throw tl::SchemaError("cannot write '" + report_path + "'");
      f << out << "\n";
    }
    std::cout << r.suite << ": " << (r.pass() ? "pass" : "FAIL") << " (" << r.config.trials << " trials, "
              << r.checks << " checks, " << r.failures.size() << " failures, " << r.elapsed_seconds << " s)\n";
    if (!r.pass()) std::cerr << r.to_json()["failures"][0].dump(2) << "\n";
    return r.pass() ? 0 : 1;
  } catch (const tl::Error& e) {
    return report_error(e);
  } catch (const tl::json::exception& e) {
    std::cerr << "error: SchemaError: " << e.what() << "\n";
    return 2;
  }
}
