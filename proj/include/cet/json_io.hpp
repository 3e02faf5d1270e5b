//------------------------------------------------------------------------------
//
//   Copyright 2026 The cet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

// JSON formats:
//   pmf            {"x_labels": [...], "y_labels": [...], "pmf": [[...], ...]}
//   factorization  {"p_w": [...], "p_x_given_w": |X| x |W|, "p_y_given_w": |Y| x |W|}
//   simulation     factorization + {"codewords": {"<w index>": "<bits>"}}

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cet/error.hpp"
#include "cet/factorization.hpp"
#include "cet/prob_core.hpp"
#include "cet/simcode.hpp"
#include "cet/solver.hpp"

namespace cet {

using Json = nlohmann::ordered_json;

namespace detail {

inline Matrix matrix_from_json(const Json& a, const char* what) {
  if (!a.is_array() || a.empty()) throw ValidationError(std::string(what) + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(a.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = a[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.empty()) throw ValidationError(std::string(what) + " rows must be non-empty arrays");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols) throw ValidationError(std::string(what) + " is ragged");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ValidationError(std::string(what) + " entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

inline Vector vector_from_json(const Json& a, const char* what) {
  if (!a.is_array() || a.empty()) throw ValidationError(std::string(what) + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ValidationError(std::string(what) + " entries must be numbers");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

inline std::vector<std::string> labels_from_json(const Json& obj, const char* key, Eigen::Index n) {
  if (!obj.contains(key)) return index_labels(n);
  const Json& a = obj[key];
  if (!a.is_array()) throw ValidationError(std::string(key) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& l : a) {
    if (l.is_string()) {
      out.push_back(l.get<std::string>());
    } else if (l.is_number_integer()) {
      out.push_back(std::to_string(l.get<long long>()));
    } else {
      throw ValidationError(std::string(key) + " must be an array of strings");
    }
  }
  return out;
}

inline Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// NaN and infinities become null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Json parse_json_text(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in " + source + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline JointPmf pmf_from_json(const Json& obj, bool normalize = false) {
  if (!obj.is_object() || !obj.contains("pmf")) throw ValidationError("pmf JSON needs a \"pmf\" field");
  const Matrix m = detail::matrix_from_json(obj["pmf"], "pmf");
  return validate(m, detail::labels_from_json(obj, "x_labels", m.rows()),
                  detail::labels_from_json(obj, "y_labels", m.cols()), normalize);
}

inline Json to_json(const JointPmf& j) {
  Json o;
  o["x_labels"] = j.x_labels();
  o["y_labels"] = j.y_labels();
  o["pmf"] = detail::to_json(j.matrix());
  return o;
}

inline MarkovFactorization factorization_from_json(const Json& obj) {
  if (!obj.is_object()) throw ValidationError("factorization JSON must be an object");
  for (const char* k : {"p_w", "p_x_given_w", "p_y_given_w"})
    if (!obj.contains(k)) throw ValidationError(std::string("factorization JSON needs \"") + k + "\"");
  return {detail::vector_from_json(obj["p_w"], "p_w"), detail::matrix_from_json(obj["p_x_given_w"], "p_x_given_w"),
          detail::matrix_from_json(obj["p_y_given_w"], "p_y_given_w")};
}

inline Json to_json(const MarkovFactorization& f) {
  Json o;
  o["p_w"] = detail::to_json(f.p_w());
  o["p_x_given_w"] = detail::to_json(f.px_given_w());
  o["p_y_given_w"] = detail::to_json(f.py_given_w());
  return o;
}

inline Json to_json(const VerifyReport& v) {
  Json o;
  o["max_abs_error"] = v.max_abs_error;
  o["tolerance"] = v.tolerance;
  o["ok"] = v.ok;
  return o;
}

inline Json to_json(const SolveConfig& c) {
  Json o;
  o["max_card"] = c.max_card;
  o["restarts"] = c.restarts;
  o["seed"] = c.seed;
  o["feas_tol"] = c.feas_tol;
  o["penalty_schedule"] = c.penalty_schedule;
  o["descent_iters"] = c.descent_iters;
  o["nmf_iters"] = c.nmf_iters;
  o["time_budget"] = c.time_budget ? Json(*c.time_budget) : Json(nullptr);
  o["warm_starts"] = c.warm_starts.size();
  return o;
}

inline Json to_json(const SolveReport& r) {
  Json o;
  o["g_bits"] = r.g_bits;
  o["mutual_info"] = r.mutual_info;
  o["closed_form"] = r.closed_form ? Json(*r.closed_form) : Json(nullptr);
  o["method"] = to_string(r.method);
  o["feasible"] = r.feasible;
  o["card"] = r.certificate.card();
  o["certificate"] = to_json(r.certificate);
  o["verification"] = to_json(r.verification);
  Json pr = Json::array();
  for (double v : r.per_restart) pr.push_back(detail::number_or_null(v));
  o["per_restart"] = pr;
  o["warnings"] = r.warnings;
  return o;
}

inline Json to_json(const SimulationCode& s) {
  Json o = to_json(s.factorization);
  Json cw = Json::object();
  for (std::size_t w = 0; w < s.code.codewords.size(); ++w) cw[std::to_string(w)] = s.code.codewords[w];
  o["codewords"] = cw;
  if (!s.x_labels.empty()) o["x_labels"] = s.x_labels;
  if (!s.y_labels.empty()) o["y_labels"] = s.y_labels;
  return o;
}

/// Reads a simulation code and checks the codewords form a prefix code with
/// one entry per W symbol.
inline SimulationCode simcode_from_json(const Json& obj) {
  SimulationCode s;
  s.factorization = factorization_from_json(obj);
  if (!obj.contains("codewords") || !obj["codewords"].is_object()) {
    throw ValidationError("simulation code JSON needs a \"codewords\" object");
  }
  const auto k = static_cast<std::size_t>(s.factorization.card());
  s.code.codewords.assign(k, "");
  std::vector<bool> seen(k, false);
  for (const auto& [key, val] : obj["codewords"].items()) {
    std::size_t w = 0;
    try {
      std::size_t pos = 0;
      w = std::stoul(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ValidationError("codeword key \"" + key + "\" is not a W index");
    }
    if (w >= k) throw ValidationError("codeword key " + key + " out of range");
    if (!val.is_string()) throw ValidationError("codewords must be bit strings");
    const std::string bits = val.get<std::string>();
    if (bits.find_first_not_of("01") != std::string::npos) throw ValidationError("codewords must be bit strings");
    s.code.codewords[w] = bits;
    seen[w] = true;
  }
  for (std::size_t w = 0; w < k; ++w)
    if (!seen[w]) throw ValidationError("missing codeword for W symbol " + std::to_string(w));
  if (k > 1 && !s.code.is_prefix_free()) throw ValidationError("codewords are not prefix-free");
  for (std::size_t w = 0; w < k; ++w)
    s.code.expected_length += s.factorization.p_w(static_cast<Eigen::Index>(w)) * static_cast<double>(s.code.codewords[w].size());
  if (obj.contains("x_labels")) s.x_labels = detail::labels_from_json(obj, "x_labels", s.factorization.nx());
  if (obj.contains("y_labels")) s.y_labels = detail::labels_from_json(obj, "y_labels", s.factorization.ny());
  if ((!s.x_labels.empty() && static_cast<Eigen::Index>(s.x_labels.size()) != s.factorization.nx()) ||
      (!s.y_labels.empty() && static_cast<Eigen::Index>(s.y_labels.size()) != s.factorization.ny())) {
    throw ValidationError("simulation code labels do not match its alphabets");
  }
  return s;
}

}  // namespace cet
