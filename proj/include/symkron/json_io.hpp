#pragma once

// Wire formats.  Complex scalars are always two-element [re, im] arrays;
// matrices are nested row-major arrays; indices in exported triplets are
// 1-based.  Compressed vectors may carry explicit labels; without them the
// canonical order is implied.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symkron/errors.hpp"
#include "symkron/hagedorn.hpp"
#include "symkron/matrix.hpp"
#include "symkron/multiindex.hpp"
#include "symkron/symspace.hpp"

namespace symkron::io {

using nlohmann::json;

inline json encode_complex(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx decode_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ShapeError("complex scalars must be [re, im] number pairs");
  return cplx{j[0].get<double>(), j[1].get<double>()};
}

inline json encode_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(encode_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix decode_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw ShapeError("matrix must be a non-empty array of rows");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw ShapeError("matrix rows must be non-empty arrays");
  Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
      throw ShapeError("matrix rows have inconsistent lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = decode_complex(j[i][c]);
  }
  return m;
}

inline json encode_sym_vec(const SymVec& v, bool with_labels = false) {
  json out;
  out["dim"] = v.dim;
  out["order"] = v.order;
  if (with_labels) {
    json labels = json::array();
    for (const auto& k : lex_enumerate(v.dim, v.order)) labels.push_back(k);
    out["labels"] = std::move(labels);
  }
  json data = json::array();
  for (const cplx& z : v.data) data.push_back(encode_complex(z));
  out["data"] = std::move(data);
  return out;
}

inline SymVec decode_sym_vec(const json& j) {
  if (!j.contains("dim") || !j.contains("order") || !j.contains("data"))
    throw ShapeError("compressed vector needs dim, order, and data");
  SymVec v;
  v.dim = j["dim"].get<int>();
  v.order = j["order"].get<int>();
  std::int64_t ln = level_size(v.dim, v.order);
  const json& data = j["data"];
  if (!data.is_array() || static_cast<std::int64_t>(data.size()) != ln)
    throw ShapeError("compressed vector data must have length " +
                     std::to_string(ln));
  v.data.resize(static_cast<std::size_t>(ln));
  if (j.contains("labels")) {
    const json& labels = j["labels"];
    if (!labels.is_array() ||
        static_cast<std::int64_t>(labels.size()) != ln)
      throw ShapeError("labels must enumerate the whole level");
    std::vector<bool> seen(static_cast<std::size_t>(ln), false);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      MultiIndex k = labels[i].get<MultiIndex>();
      std::size_t r =
          static_cast<std::size_t>(lex_rank(v.dim, v.order, k) - 1);
      if (seen[r]) throw ShapeError("duplicate label in compressed vector");
      seen[r] = true;
      v.data[r] = decode_complex(data[i]);
    }
  } else {
    for (std::size_t i = 0; i < v.data.size(); ++i)
      v.data[i] = decode_complex(data[i]);
  }
  return v;
}

inline json encode_basis(const BasisMatrix& P) {
  json out;
  out["dim"] = P.dim;
  out["order"] = P.order;
  out["rows"] = P.rows;
  out["cols"] = P.cols;
  json triplets = json::array();
  for (std::int64_t i = 0; i < P.rows; ++i)
    for (std::int64_t c : P.columns[static_cast<std::size_t>(i)])
      triplets.push_back(
          json::array({i + 1, c, P.values[static_cast<std::size_t>(i)]}));
  out["triplets"] = std::move(triplets);
  return out;
}

inline BasisMatrix decode_basis(const json& j) {
  BasisMatrix P;
  P.dim = j.at("dim").get<int>();
  P.order = j.at("order").get<int>();
  P.rows = j.at("rows").get<std::int64_t>();
  P.cols = j.at("cols").get<std::int64_t>();
  P.values.assign(static_cast<std::size_t>(P.rows), 0.0);
  P.columns.assign(static_cast<std::size_t>(P.rows), {});
  for (const auto& t : j.at("triplets")) {
    if (!t.is_array() || t.size() != 3)
      throw ShapeError("triplets must be [row, col, value]");
    std::int64_t row = t[0].get<std::int64_t>();
    std::int64_t col = t[1].get<std::int64_t>();
    if (row < 1 || row > P.rows || col < 1 || col > P.cols)
      throw ShapeError("triplet index out of range");
    P.values[static_cast<std::size_t>(row - 1)] = t[2].get<double>();
    P.columns[static_cast<std::size_t>(row - 1)].push_back(col);
  }
  return P;
}

inline json encode_params(const hagedorn::ParamPair& p) {
  json out;
  out["dim"] = p.dim;
  out["hbar"] = p.hbar;
  out["A"] = encode_matrix(p.A);
  out["B"] = encode_matrix(p.B);
  return out;
}

// Raw read; validation is the caller's decision.
inline hagedorn::ParamPair decode_params(const json& j) {
  hagedorn::ParamPair p;
  p.dim = j.at("dim").get<int>();
  p.hbar = j.at("hbar").get<double>();
  p.A = decode_matrix(j.at("A"));
  p.B = decode_matrix(j.at("B"));
  if (p.A.rows() != p.dim || p.A.cols() != p.dim || p.B.rows() != p.dim ||
      p.B.cols() != p.dim)
    throw ShapeError("parameter matrices do not match dim");
  return p;
}

inline json encode_realignment(const hagedorn::RealignmentPlan& plan) {
  json out;
  out["mode"] = (plan.mode == hagedorn::RealignMode::polar) ? "polar" : "svd";
  out["U"] = encode_matrix(plan.U);
  out["A_new"] = encode_matrix(plan.A_new);
  out["B_new"] = encode_matrix(plan.B_new);
  out["phase"] = encode_complex(plan.phase);
  return out;
}

inline json encode_transform(const hagedorn::BundleTransform& t) {
  json out;
  out["dim"] = t.dim;
  out["order"] = t.order;
  out["U"] = encode_matrix(t.U);
  out["phase"] = encode_complex(t.phase);
  out["T"] = encode_matrix(t.matrix);
  out["params_new"] = encode_params(t.new_params);
  return out;
}

// Point sets: one point per line, d comma-separated real columns.
inline RealMatrix read_points_csv(std::istream& in, int expected_dim = -1) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      double v = std::stod(cell, &pos);
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ShapeError("points file has ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ShapeError("points file is empty");
  int d = static_cast<int>(rows.front().size());
  if (expected_dim > 0 && d != expected_dim)
    throw ShapeError("points have dimension " + std::to_string(d) +
                     ", expected " + std::to_string(expected_dim));
  RealMatrix pts(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < d; ++j)
      pts(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return pts;
}

// round-trip safe decimal form
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace symkron::io
