#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "poincare.hpp"

namespace tl {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---- emit ----

inline json to_json(const IntMatrix& m) {
  json entries = json::array();
  for (auto& x : m.data()) entries.push_back(x.str());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline json to_json(const SignedComplex& c) {
  json diffs = json::array();
  for (int r = 1; r <= c.top(); ++r) diffs.push_back(to_json(c.d(r)));
  return {{"ranks", c.ranks()}, {"diffs", diffs}, {"eta", c.eta().bit}};
}

inline json to_json(const ChainMap& f) {
  json mats = json::array();
  for (auto& m : f.mats()) mats.push_back(to_json(m));
  return {{"source", to_json(f.source())}, {"target", to_json(f.target())}, {"mats", mats}};
}

inline json to_json(const SymmetricComplex& x) {
  json mats = json::array();
  for (auto& m : x.phi0().mats()) mats.push_back(to_json(m));
  return {{"n", x.n()}, {"complex", to_json(x.complex())}, {"phi0", mats}};
}

inline json to_json(const FilteredComplex& f) {
  json comps = json::array();
  for (int r = 1; r <= f.top(); ++r)
    for (int s = 0; s <= f.k(); ++s)
      for (int j = 0; j <= s; ++j) {
        IntMatrix m = f.component(r, s, s - j);
        if (m.rows() && m.cols() && !m.is_zero())
          comps.push_back({{"degree", r}, {"filtration", s}, {"j", j}, {"matrix", to_json(m)}});
      }
  json signs = json::array();
  for (auto& s : f.piece_signs()) signs.push_back(s.bit);
  return {{"k", f.k()}, {"ranks", f.ranks()}, {"components", comps}, {"piece_signs", signs}, {"ambient_sign", f.ambient().bit}};
}

inline json to_json(const UnimodularForm& h, int k = 0) { return {{"matrix", to_json(h.matrix())}, {"k", k}}; }

template <class T>
json document(const std::string& kind, const T& x) {
  json j = to_json(x);
  j["kind"] = kind;
  j["schema_version"] = kSchemaVersion;
  return j;
}

inline json document(const UnimodularForm& h, int k) {
  json j = to_json(h, k);
  j["kind"] = "form";
  j["schema_version"] = kSchemaVersion;
  return j;
}

// ---- parse ----

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline long long integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

inline std::size_t count(const json& j, const char* what) {
  long long v = integer(j, what);
  if (v < 0) throw SchemaError(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

inline Z2 bit(const json& j, const char* what) {
  long long v = integer(j, what);
  if (v != 0 && v != 1) throw SchemaError(std::string(what) + " must be 0 or 1");
  return Z2(static_cast<int>(v));
}

inline const json& array(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array");
  return j;
}

inline std::vector<std::size_t> counts(const json& j, const char* what) {
  std::vector<std::size_t> out;
  for (auto& x : array(j, what)) out.push_back(count(x, what));
  return out;
}

}  // namespace detail

inline IntMatrix matrix_from_json(const json& j) {
  const std::size_t rows = detail::count(detail::field(j, "rows"), "rows");
  const std::size_t cols = detail::count(detail::field(j, "cols"), "cols");
  const json& e = detail::array(detail::field(j, "entries"), "entries");
  if (e.size() != rows * cols) throw SchemaError("entries has " + std::to_string(e.size()) + " values for " + std::to_string(rows) + "x" + std::to_string(cols));
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i].is_string()) throw SchemaError("matrix entries must be decimal strings");
    const std::string s = e[i].get<std::string>();
    const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw SchemaError("bad integer '" + s + "'");
    m(i / cols, i % cols) = Integer(s);
  }
  return m;
}

inline std::vector<IntMatrix> matrices_from_json(const json& j, const char* what) {
  std::vector<IntMatrix> out;
  for (auto& x : detail::array(j, what)) out.push_back(matrix_from_json(x));
  return out;
}

inline SignedComplex complex_from_json(const json& j) {
  auto ranks = detail::counts(detail::field(j, "ranks"), "ranks");
  if (ranks.empty()) throw SchemaError("ranks must be non-empty");
  auto diffs = matrices_from_json(detail::field(j, "diffs"), "diffs");
  Z2 eta = j.contains("eta") ? detail::bit(j.at("eta"), "eta") : Z2();
  return SignedComplex(ranks, diffs, eta);
}

inline ChainMap map_from_json(const json& j) {
  return ChainMap(complex_from_json(detail::field(j, "source")), complex_from_json(detail::field(j, "target")),
                  matrices_from_json(detail::field(j, "mats"), "mats"));
}

inline SymmetricComplex symmetric_from_json(const json& j) {
  const long long n = detail::integer(detail::field(j, "n"), "n");
  if (n < 0) throw SchemaError("n must be non-negative");
  return SymmetricComplex(complex_from_json(detail::field(j, "complex")), static_cast<int>(n),
                          matrices_from_json(detail::field(j, "phi0"), "phi0"));
}

inline FilteredComplex filtered_from_json(const json& j) {
  const std::size_t k = detail::count(detail::field(j, "k"), "k");
  std::vector<std::vector<std::size_t>> ranks;
  for (auto& row : detail::array(detail::field(j, "ranks"), "ranks")) {
    ranks.push_back(detail::counts(row, "ranks"));
    if (ranks.back().size() != k + 1) throw SchemaError("each ranks row needs k+1 entries");
  }
  if (ranks.empty()) throw SchemaError("ranks must be non-empty");
  FilteredComplex::Components comps;
  for (auto& c : detail::array(detail::field(j, "components"), "components")) {
    const int r = static_cast<int>(detail::integer(detail::field(c, "degree"), "degree"));
    const int s = static_cast<int>(detail::integer(detail::field(c, "filtration"), "filtration"));
    const int jj = static_cast<int>(detail::integer(detail::field(c, "j"), "j"));
    if (r < 1 || r >= static_cast<int>(ranks.size()) || s < 0 || s > static_cast<int>(k) || jj < 0 || jj > s)
      throw SchemaError("component index (" + std::to_string(r) + "," + std::to_string(s) + "," + std::to_string(jj) + ") out of range");
    if (comps.count({r, s, jj})) throw SchemaError("duplicate component");
    comps[{r, s, jj}] = matrix_from_json(detail::field(c, "matrix"));
  }
  std::vector<Z2> signs;
  for (auto& b : detail::array(detail::field(j, "piece_signs"), "piece_signs")) signs.push_back(detail::bit(b, "piece_signs"));
  if (signs.size() != k + 1) throw SchemaError("piece_signs needs k+1 entries");
  return FilteredComplex::from_components(ranks, comps, signs, detail::bit(detail::field(j, "ambient_sign"), "ambient_sign"));
}

struct FormDocument {
  UnimodularForm form;
  int k = 0;
};

inline FormDocument form_from_json(const json& j) {
  const long long k = j.contains("k") ? detail::integer(j.at("k"), "k") : 0;
  if (k < 0) throw SchemaError("k must be non-negative");
  return {UnimodularForm(matrix_from_json(detail::field(j, "matrix"))), static_cast<int>(k)};
}

inline std::string document_kind(const json& j) {
  const json& v = detail::field(j, "schema_version");
  if (detail::integer(v, "schema_version") != kSchemaVersion) throw SchemaError("unsupported schema_version");
  const json& kind = detail::field(j, "kind");
  if (!kind.is_string()) throw SchemaError("kind must be a string");
  const std::string s = kind.get<std::string>();
  if (s != "complex" && s != "map" && s != "symmetric" && s != "filtered" && s != "form")
    throw SchemaError("unknown kind '" + s + "'");
  return s;
}

// parse and validate by kind; returns the normalized document
inline json validate_document(const json& j) {
  const std::string kind = document_kind(j);
  if (kind == "complex") return document(kind, complex_from_json(j));
  if (kind == "map") return document(kind, map_from_json(j));
  if (kind == "symmetric") return document(kind, symmetric_from_json(j));
  if (kind == "filtered") return document(kind, filtered_from_json(j));
  auto f = form_from_json(j);
  return document(f.form, f.k);
}

}  // namespace tl
