// Copyright 2026 The qsc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsc/comparison.hpp"
#include "qsc/hermitian.hpp"
#include "qsc/policy.hpp"
#include "qsc/states.hpp"

namespace qsc::io {

using ordered_json = nlohmann::ordered_json;

/// Thrown for malformed input documents; the message names the file and the
/// offending field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline ordered_json parse_document(const std::string& text, const std::string& where) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(where + ": " + ex.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline const ordered_json& field(const ordered_json& j, const char* name,
                                 const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(where + ": missing field '" + name + "'");
  return *it;
}

inline std::vector<std::vector<double>> real_grid(const ordered_json& j, int dim,
                                                  const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
  std::vector<std::vector<double>> out;
  for (int r = 0; r < dim; ++r) {
    const ordered_json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ParseError(where + ": row " + std::to_string(r) + " must have " +
                       std::to_string(dim) + " entries");
    std::vector<double> vals;
    for (int c = 0; c < dim; ++c) {
      const ordered_json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw ParseError(where + ": row " + std::to_string(r) + ", column " +
                         std::to_string(c) + " is not a number");
      vals.push_back(v.get<double>());
    }
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace detail

/// Parses a {dim, re, im} document into a Hermitian matrix.
inline HermitianMatrix parse_matrix(const ordered_json& j, const std::string& where,
                                    double tol = 1e-9) {
  const ordered_json& dj = detail::field(j, "dim", where);
  if (!dj.is_number_integer() || dj.get<int>() <= 0)
    throw ParseError(where + ": field 'dim' must be a positive integer");
  int dim = dj.get<int>();
  auto re = detail::real_grid(detail::field(j, "re", where), dim, where + ", field 're'");
  auto im = detail::real_grid(detail::field(j, "im", where), dim, where + ", field 'im'");
  std::vector<cplx> entries;
  entries.reserve(static_cast<std::size_t>(dim) * dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      entries.emplace_back(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                           im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  try {
    return HermitianMatrix::from_entries(dim, entries, tol);
  } catch (const std::exception& ex) {
    throw ParseError(where + ": " + ex.what());
  }
}

inline ordered_json matrix_to_json(const HermitianMatrix& m) {
  ordered_json j;
  j["dim"] = m.dim();
  ordered_json re = ordered_json::array();
  ordered_json im = ordered_json::array();
  for (int r = 0; r < m.dim(); ++r) {
    ordered_json rr = ordered_json::array();
    ordered_json ir = ordered_json::array();
    for (int c = 0; c < m.dim(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline HermitianMatrix load_matrix(const std::string& path, double tol = 1e-9) {
  return parse_matrix(detail::parse_document(detail::read_file(path), path), path, tol);
}

inline void save_matrix(const std::string& path, const HermitianMatrix& m) {
  detail::write_file(path, matrix_to_json(m).dump(2) + "\n");
}

inline DensityMatrix load_density(const std::string& path, double tol = 1e-9) {
  try {
    return DensityMatrix(load_matrix(path, tol), tol);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

/// Parses a {labels_u, num_y, probs} document; probs is the flat joint table
/// in label-major, then y (when num_y > 0), then x order.
inline Encoding parse_encoding(const ordered_json& j, const std::string& where) {
  const ordered_json& lj = detail::field(j, "labels_u", where);
  if (!lj.is_array() || lj.empty())
    throw ParseError(where + ": field 'labels_u' must be a non-empty array");
  std::vector<std::string> labels;
  for (const auto& l : lj) {
    if (!l.is_string()) throw ParseError(where + ": field 'labels_u' must hold strings");
    labels.push_back(l.get<std::string>());
  }
  const ordered_json& nj = detail::field(j, "num_y", where);
  if (!nj.is_number_integer() || nj.get<int>() < 0)
    throw ParseError(where + ": field 'num_y' must be a nonnegative integer");
  const ordered_json& pj = detail::field(j, "probs", where);
  if (!pj.is_array()) throw ParseError(where + ": field 'probs' must be an array");
  std::vector<double> probs;
  for (const auto& v : pj) {
    if (!v.is_number()) throw ParseError(where + ": field 'probs' must hold numbers");
    probs.push_back(v.get<double>());
  }
  try {
    return Encoding(std::move(labels), nj.get<int>(), std::move(probs));
  } catch (const std::exception& ex) {
    throw ParseError(where + ": " + ex.what());
  }
}

inline ordered_json encoding_to_json(const Encoding& e) {
  ordered_json j;
  j["labels_u"] = e.labels_u();
  j["num_y"] = e.num_y();
  ordered_json probs = ordered_json::array();
  for (int u = 0; u < e.num_u(); ++u) {
    if (e.has_y()) {
      for (int y = 0; y < e.num_y(); ++y)
        for (int x = 0; x < 2; ++x) probs.push_back(e.p(u, y, x));
    } else {
      for (int x = 0; x < 2; ++x) probs.push_back(e.p(u, x));
    }
  }
  j["probs"] = std::move(probs);
  return j;
}

inline Encoding load_encoding(const std::string& path) {
  return parse_encoding(detail::parse_document(detail::read_file(path), path), path);
}

inline void save_encoding(const std::string& path, const Encoding& e) {
  detail::write_file(path, encoding_to_json(e).dump(2) + "\n");
}

/// Choi documents carry {dim_in, dim_out, re, im} with the matrix on the
/// input (x) output product space.
inline ChoiMatrix parse_choi(const ordered_json& j, const std::string& where,
                             double tol = 1e-8) {
  const ordered_json& di = detail::field(j, "dim_in", where);
  const ordered_json& dj = detail::field(j, "dim_out", where);
  if (!di.is_number_integer() || di.get<int>() <= 0)
    throw ParseError(where + ": field 'dim_in' must be a positive integer");
  if (!dj.is_number_integer() || dj.get<int>() <= 0)
    throw ParseError(where + ": field 'dim_out' must be a positive integer");
  int din = di.get<int>();
  int dout = dj.get<int>();
  ordered_json mat = j;
  mat["dim"] = din * dout;
  HermitianMatrix m = parse_matrix(mat, where, tol);
  try {
    return ChoiMatrix(m, din, dout, tol);
  } catch (const std::exception& ex) {
    throw ParseError(where + ": " + ex.what());
  }
}

inline ordered_json choi_to_json(const ChoiMatrix& c) {
  ordered_json j;
  j["dim_in"] = c.dim_in();
  j["dim_out"] = c.dim_out();
  ordered_json m = matrix_to_json(c.mat());
  j["re"] = std::move(m["re"]);
  j["im"] = std::move(m["im"]);
  return j;
}

inline ChoiMatrix load_choi(const std::string& path, double tol = 1e-8) {
  return parse_choi(detail::parse_document(detail::read_file(path), path), path, tol);
}

inline void save_choi(const std::string& path, const ChoiMatrix& c) {
  detail::write_file(path, choi_to_json(c).dump(2) + "\n");
}

/// FNV-1a 64-bit digest of a byte string, reported as fixed-width hex.
inline std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline std::string file_digest(const std::string& path) {
  return fnv1a_digest(detail::read_file(path));
}

inline ordered_json policy_to_json(const NumericPolicy& p) {
  ordered_json j;
  j["validation_tol"] = p.validation_tol;
  j["solver_tol"] = p.solver_tol;
  j["verdict_margin"] = p.verdict_margin;
  return j;
}

/// Applies QSC_VALIDATION_TOL, QSC_SOLVER_TOL and QSC_VERDICT_MARGIN
/// environment overrides on top of the defaults.
inline NumericPolicy policy_from_env() {
  NumericPolicy p;
  auto read = [](const char* name, double& target) {
    const char* v = std::getenv(name);
    if (!v || !*v) return;
    char* end = nullptr;
    double parsed = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(parsed > 0.0))
      throw std::runtime_error(std::string(name) + ": expected a positive number, got '" +
                               v + "'");
    target = parsed;
  };
  read("QSC_VALIDATION_TOL", p.validation_tol);
  read("QSC_SOLVER_TOL", p.solver_tol);
  read("QSC_VERDICT_MARGIN", p.verdict_margin);
  return p;
}

/// Machine-readable run report: command echo, input digests, the policy in
/// force, the seed (when the command is randomized), a command-specific
/// payload, and wall time. Everything except timing_ms is a pure function of
/// the inputs, so byte-identical reruns differ only in that field (it is
/// emitted last for easy stripping).
struct VerdictReport {
  std::string command;
  std::vector<std::string> argv;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> path
  NumericPolicy policy;
  std::optional<std::uint64_t> seed;
  ordered_json payload = ordered_json::object();
  double timing_ms = 0.0;

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["argv"] = argv;
    ordered_json ins = ordered_json::object();
    for (const auto& [name, path] : inputs) {
      ordered_json rec;
      rec["path"] = path;
      rec["fnv1a64"] = file_digest(path);
      ins[name] = std::move(rec);
    }
    j["inputs"] = std::move(ins);
    j["policy"] = policy_to_json(policy);
    if (seed.has_value()) j["seed"] = *seed;
    j["report"] = payload;
    j["timing_ms"] = timing_ms;
    return j;
  }
};

}  // namespace qsc::io
