#pragma once

// JSON forms of the library's data: complex numbers as [re, im], matrices as
// row-major nested arrays, the oracle specification file, lift diagnostics
// and symmetry-check reports.

#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "wigner/error.hpp"
#include "wigner/lift_common.hpp"
#include "wigner/linalg.hpp"
#include "wigner/random.hpp"
#include "wigner/symmetry.hpp"

namespace wigner::io {

using nlohmann::json;

inline json from_complex(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex to_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::InvalidArgument, "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json from_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(from_complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix to_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::InvalidArgument, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array())
    throw Error(ErrorKind::InvalidArgument, "matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::InvalidArgument, "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = to_complex(row[c]);
  }
  return m;
}

inline json from_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(from_complex(v(i)));
  return out;
}

/// Contents of an oracle specification file.
struct OracleSpec {
  int dim = 2;
  std::string kind;  // unitary | antiunitary | transpose | depolarizing
  std::optional<Matrix> matrix;
  std::optional<double> p;
};

inline json to_json(const OracleSpec& spec) {
  json j;
  j["dim"] = spec.dim;
  j["kind"] = spec.kind;
  if (spec.matrix) j["matrix"] = from_matrix(*spec.matrix);
  if (spec.p) j["p"] = *spec.p;
  return j;
}

inline OracleSpec parse_oracle_spec(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "oracle spec must be an object");
  OracleSpec spec;
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw Error(ErrorKind::InvalidArgument, "oracle spec needs integer \"dim\"");
  spec.dim = j["dim"].get<int>();
  if (spec.dim < 1) throw Error(ErrorKind::InvalidArgument, "\"dim\" must be positive");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorKind::InvalidArgument, "oracle spec needs string \"kind\"");
  spec.kind = j["kind"].get<std::string>();

  if (spec.kind == "unitary" || spec.kind == "antiunitary") {
    if (!j.contains("matrix"))
      throw Error(ErrorKind::InvalidArgument, "kind " + spec.kind + " needs \"matrix\"");
    spec.matrix = to_matrix(j["matrix"]);
    if (spec.matrix->rows() != spec.dim || spec.matrix->cols() != spec.dim)
      throw Error(ErrorKind::DimensionMismatch, "\"matrix\" must be dim x dim");
  } else if (spec.kind == "depolarizing") {
    if (!j.contains("p") || !j["p"].is_number())
      throw Error(ErrorKind::InvalidArgument, "kind depolarizing needs numeric \"p\"");
    spec.p = j["p"].get<double>();
  } else if (spec.kind != "transpose") {
    throw Error(ErrorKind::InvalidArgument, "unknown oracle kind \"" + spec.kind + "\"");
  }
  return spec;
}

inline RaySymmetryOracle make_oracle(const OracleSpec& spec,
                                     const Tolerances& tol = default_tolerances) {
  if (spec.kind == "unitary") return induced_by_unitary(*spec.matrix, tol);
  if (spec.kind == "antiunitary") return induced_by_antiunitary(*spec.matrix, tol);
  if (spec.kind == "transpose") return induced_by_transpose(spec.dim);
  if (spec.kind == "depolarizing") return depolarizing_map(spec.dim, *spec.p);
  throw Error(ErrorKind::InvalidArgument, "unknown oracle kind \"" + spec.kind + "\"");
}

/// Fixture generation: Haar-random matrices for the (anti)unitary kinds.
inline OracleSpec generate_spec(int dim, const std::string& kind, std::uint64_t seed,
                                double p = 0.5) {
  OracleSpec spec;
  spec.dim = dim;
  spec.kind = kind;
  if (kind == "unitary" || kind == "antiunitary") {
    Rng rng(seed);
    spec.matrix = haar_unitary(rng, dim);
  } else if (kind == "depolarizing") {
    if (!(p > 0.0 && p <= 1.0))
      throw Error(ErrorKind::InvalidArgument, "depolarizing p must lie in (0, 1]");
    spec.p = p;
  } else if (kind != "transpose") {
    throw Error(ErrorKind::InvalidArgument, "unknown oracle kind \"" + kind + "\"");
  }
  return spec;
}

inline std::string pair_key(int j, int k) {
  return std::to_string(j) + "," + std::to_string(k);
}

inline json to_json(const LiftResult& r) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["kind"] = std::string(to_string(r.kind));
  j["W"] = from_matrix(r.w);
  j["residual"] = r.residual;
  j["oracle_calls"] = r.oracle_calls;
  if (const auto* rec = std::get_if<CanonicalizationRecord>(&r.record)) {
    json phi = json::object();
    json eps = json::object();
    rec->phi_table.for_each([&](int a, int b, double v) { phi[pair_key(a, b)] = v; });
    rec->eps_table.for_each([&](int a, int b, int v) { eps[pair_key(a, b)] = v; });
    j["phi_table"] = std::move(phi);
    j["eps_table"] = std::move(eps);
    j["gauge_phases"] = rec->gauge_phases;
    j["eta_phases"] = rec->eta_phases;
    j["residual_phi"] = rec->residual_phi;
  } else if (const auto* tr = std::get_if<InductiveTrace>(&r.record)) {
    j["base_det"] = tr->base.det_sign;
    json rot = json::array();
    for (int row = 0; row < 3; ++row)
      rot.push_back({tr->base.r(row, 0), tr->base.r(row, 1), tr->base.r(row, 2)});
    j["base_rotation"] = std::move(rot);
    j["extension_phases"] = tr->extension_phases;
    j["per_step_residuals"] = tr->per_step_residuals;
  }
  return j;
}

inline json to_json(const SymmetryCheckReport& r) {
  json j;
  j["pairs_tested"] = r.pairs_tested;
  j["max_sc_violation"] = r.max_sc_violation;
  j["max_purity_violation"] = r.max_purity_violation;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (r.witness)
    j["witness"] = json::array({from_matrix(r.witness->first), from_matrix(r.witness->second)});
  else
    j["witness"] = nullptr;
  return j;
}

inline json to_json(const Error& e) {
  json j;
  j["error"] = std::string(e.name());
  j["message"] = e.what();
  if (e.witness().empty())
    j["witness"] = nullptr;
  else
    j["witness"] = e.witness();
  j["measured"] = e.measured();
  return j;
}

}  // namespace wigner::io
