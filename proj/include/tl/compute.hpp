#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <optional>
#include <string>

#include "io.hpp"

namespace tl {

inline constexpr const char* kVersion = "0.1.0";

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

struct ComputeOptions {
  std::optional<int> dim;
  std::optional<json> with;  // second operand for tensor
};

inline const std::vector<std::string>& compute_commands() {
  static const std::vector<std::string> c{"chi", "tau", "tau-map", "tau-sym", "sign", "cone", "dual",
                                          "tensor", "graded", "amalgamate", "theta"};
  return c;
}

namespace detail {

[[noreturn]] inline void wrong_kind(const std::string& cmd, const std::string& kind) {
  throw SchemaError("command '" + cmd + "' does not accept kind '" + kind + "'");
}

inline int need_dim(const ComputeOptions& o, const std::string& cmd) {
  if (!o.dim) throw SchemaError("command '" + cmd + "' needs --dim");
  if (*o.dim < 0) throw SchemaError("--dim must be non-negative");
  return *o.dim;
}

inline SymmetricComplex as_symmetric(const json& doc, const std::string& kind, const std::string& cmd) {
  if (kind == "symmetric") return symmetric_from_json(doc);
  if (kind == "form") {
    auto f = form_from_json(doc);
    return form_to_complex(f.form, f.k);
  }
  wrong_kind(cmd, kind);
}

}  // namespace detail

// the result value of a command on a parsed document
inline json compute_value(const std::string& cmd, const json& doc, const ComputeOptions& opt = {}) {
  const std::string kind = document_kind(doc);
  if (cmd == "chi") {
    if (kind == "complex") return euler_char(complex_from_json(doc));
    if (kind == "symmetric") return euler_char(symmetric_from_json(doc).complex());
    if (kind == "filtered") return euler_char(total_complex(filtered_from_json(doc)));
    if (kind == "form") return form_from_json(doc).form.rank();
    detail::wrong_kind(cmd, kind);
  }
  if (cmd == "tau") {
    if (kind == "complex") return torsion_contractible(complex_from_json(doc)).bit;
    if (kind == "filtered") return torsion_contractible(total_complex(filtered_from_json(doc))).bit;
    detail::wrong_kind(cmd, kind);
  }
  if (cmd == "tau-map") {
    if (kind != "map") detail::wrong_kind(cmd, kind);
    return tau_new_map(map_from_json(doc)).bit;
  }
  if (cmd == "tau-sym") return tau_new_symmetric(detail::as_symmetric(doc, kind, cmd)).bit;
  if (cmd == "sign") {
    if (kind == "form") return signature(form_from_json(doc).form);
    return signature(detail::as_symmetric(doc, kind, cmd));
  }
  if (cmd == "cone") {
    if (kind != "map") detail::wrong_kind(cmd, kind);
    return document("complex", mapping_cone(map_from_json(doc)));
  }
  if (cmd == "dual") {
    const int n = detail::need_dim(opt, cmd);
    if (kind == "complex") {
      SignedComplex c = complex_from_json(doc);
      if (c.top() > n) c = trim(c, n);
      return document("complex", dual_complex(c, n));
    }
    if (kind == "filtered") return document("filtered", filtered_dual(filtered_from_json(doc), n));
    detail::wrong_kind(cmd, kind);
  }
  if (cmd == "tensor") {
    if (!opt.with) throw SchemaError("command 'tensor' needs --with");
    const std::string other = document_kind(*opt.with);
    if (kind == "complex" && other == "complex")
      return document("filtered", tensor_filtered(complex_from_json(doc), complex_from_json(*opt.with)));
    if (kind == "complex" || other == "complex") detail::wrong_kind(cmd, kind == "complex" ? other : kind);
    return document("symmetric", tensor_symmetric(detail::as_symmetric(doc, kind, cmd),
                                                  detail::as_symmetric(*opt.with, other, cmd)));
  }
  if (cmd == "graded") {
    if (kind != "filtered") detail::wrong_kind(cmd, kind);
    const GradedComplex g = associated_graded(filtered_from_json(doc));
    json pieces = json::array(), derived = json::array();
    for (auto& p : g.pieces) pieces.push_back(to_json(p));
    for (int p = 1; p <= g.k(); ++p) derived.push_back(to_json(g.derived[p]));
    json out{{"pieces", pieces}, {"derived", derived}, {"ambient_sign", g.ambient.bit},
             {"square_witness_ok", square_witness_ok(g)}};
    auto c = graded_contraction(g);
    out["contractible"] = c.has_value();
    if (c) out["torsion"] = graded_torsion(g, *c).bit;
    return out;
  }
  if (cmd == "amalgamate") {
    if (kind != "filtered") detail::wrong_kind(cmd, kind);
    return document("filtered", amalgamate(filtered_from_json(doc)));
  }
  if (cmd == "theta") {
    if (kind != "filtered") detail::wrong_kind(cmd, kind);
    const int n = detail::need_dim(opt, cmd);
    const ChainMap th = theta_map(filtered_from_json(doc), n);
    return {{"map", document("map", th)}, {"tau", tau_new_map(th).bit}};
  }
  throw SchemaError("unknown command '" + cmd + "'");
}

inline json result_document(const std::string& cmd, const std::string& input_bytes, const json& value) {
  return {{"schema_version", kSchemaVersion}, {"command", cmd}, {"version", kVersion},
          {"input_sha256", sha256_hex(input_bytes)}, {"result", value}};
}

inline json compute(const std::string& cmd, const std::string& input_bytes, const ComputeOptions& opt = {}) {
  json doc;
  try {
    doc = json::parse(input_bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return result_document(cmd, input_bytes, compute_value(cmd, doc, opt));
}

}  // namespace tl
