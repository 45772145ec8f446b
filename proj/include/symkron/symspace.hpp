#pragma once

// The symmetric subspace of C^{d^n}: vectors whose components agree
// wherever the redundant enumeration repeats a multi-index.  Such a vector
// carries at most L_n distinct values; the compressed representation keeps
// exactly those, ordered canonically.
//
// Two coordinate systems coexist deliberately:
//   * label coordinates: the raw distinct component values x_k,
//   * orthonormal coordinates: scaled by sqrt(#sigma), which is what the
//     basis matrix P produces.  compress/expand implement P and its adjoint
//     through closed formulas; labels_to_full/full_to_labels are the plain
//     replication maps.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "symkron/errors.hpp"
#include "symkron/matrix.hpp"
#include "symkron/multiindex.hpp"

namespace symkron {

// Compressed vector: one complex value per distinct multi-index of the level.
struct SymVec {
  int dim = 0;
  int order = 0;
  std::vector<cplx> data;  // length level_size(dim, order)
};

// Dense vector over the full d^n redundant positions.
struct FullVec {
  int dim = 0;
  int order = 0;
  std::vector<cplx> data;  // length dim^order
};

inline SymVec make_sym_vec(int dim, int order) {
  SymVec v;
  v.dim = dim;
  v.order = order;
  v.data.assign(static_cast<std::size_t>(level_size(dim, order)), cplx{0.0});
  return v;
}

inline FullVec make_full_vec(int dim, int order,
                             std::int64_t cap = default_full_cap()) {
  FullVec v;
  v.dim = dim;
  v.order = order;
  v.data.assign(static_cast<std::size_t>(full_size_checked(dim, order, cap)),
                cplx{0.0});
  return v;
}

inline void require_sym_shape(const SymVec& v, const char* ctx) {
  if (static_cast<std::int64_t>(v.data.size()) != level_size(v.dim, v.order))
    throw ShapeError(std::string(ctx) + ": compressed vector has length " +
                     std::to_string(v.data.size()) + ", expected " +
                     std::to_string(level_size(v.dim, v.order)));
}

inline void require_full_shape(const FullVec& v, const char* ctx) {
  if (static_cast<std::int64_t>(v.data.size()) != full_size(v.dim, v.order))
    throw ShapeError(std::string(ctx) + ": full vector has length " +
                     std::to_string(v.data.size()) + ", expected " +
                     std::to_string(full_size(v.dim, v.order)));
}

// Sparse basis of the symmetric subspace, one row per distinct multi-index.
// Row i holds the constant value 1/sqrt(#sigma(i)) on the columns sigma(i).
// Columns are stored 1-based, matching the exported triplet format.
struct BasisMatrix {
  int dim = 0;
  int order = 0;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> values;                       // per row
  std::vector<std::vector<std::int64_t>> columns;   // per row, ascending
};

namespace detail {

struct SymmetryScan {
  bool symmetric = true;
  double max_abs_deviation = 0.0;
  double max_norm = 0.0;
  std::int64_t offender_a = 0;  // 1-based positions of the worst pair
  std::int64_t offender_b = 0;
  std::vector<cplx> representatives;  // first-seen value per distinct index
  std::vector<cplx> averages;
};

// One pass over all d^n positions: record first occurrence per distinct
// multi-index, track the largest in-class deviation, accumulate sums.
inline SymmetryScan scan_symmetry(const FullVec& x, double tol) {
  require_full_shape(x, "scan_symmetry");
  std::int64_t ln = level_size(x.dim, x.order);
  std::int64_t dn = full_size(x.dim, x.order);
  SymmetryScan scan;
  scan.representatives.assign(static_cast<std::size_t>(ln), cplx{0.0});
  scan.averages.assign(static_cast<std::size_t>(ln), cplx{0.0});
  std::vector<std::int64_t> first_pos(static_cast<std::size_t>(ln), 0);
  std::vector<cplx> sums(static_cast<std::size_t>(ln), cplx{0.0});
  for (const cplx& v : x.data)
    scan.max_norm = std::max(scan.max_norm, std::abs(v));
  for (std::int64_t j = 1; j <= dn; ++j) {
    MultiIndex k = redundant_entry(x.dim, x.order, j);
    std::size_t r = static_cast<std::size_t>(lex_rank(x.dim, x.order, k) - 1);
    const cplx v = x.data[static_cast<std::size_t>(j - 1)];
    sums[r] += v;
    if (first_pos[r] == 0) {
      first_pos[r] = j;
      scan.representatives[r] = v;
    } else {
      double dev = std::abs(v - scan.representatives[r]);
      if (dev > scan.max_abs_deviation) {
        scan.max_abs_deviation = dev;
        scan.offender_a = first_pos[r];
        scan.offender_b = j;
      }
    }
  }
  for (std::int64_t i = 0; i < ln; ++i) {
    double card = static_cast<double>(sigma_cardinality(x.dim, x.order, i + 1));
    scan.averages[static_cast<std::size_t>(i)] =
        sums[static_cast<std::size_t>(i)] / card;
  }
  scan.symmetric = scan.max_abs_deviation <= tol * scan.max_norm;
  return scan;
}

}  // namespace detail

constexpr double kSymmetryTol = 1e-12;

// True iff components indexed by the same multi-index agree within
// tol relative to the max-norm.  The zero vector is symmetric.
inline bool is_symmetric(const FullVec& x, double tol = kSymmetryTol) {
  return detail::scan_symmetry(x, tol).symmetric;
}

// Orthonormal basis vector supported on sigma(i).
inline FullVec basis_vector(int dim, int order, std::int64_t i,
                            std::int64_t cap = default_full_cap()) {
  FullVec p = make_full_vec(dim, order, cap);
  auto support = sigma_set(dim, order, i, cap);
  double value = 1.0 / std::sqrt(static_cast<double>(support.size()));
  for (std::int64_t j : support)
    p.data[static_cast<std::size_t>(j - 1)] = value;
  return p;
}

inline BasisMatrix build_P(int dim, int order,
                           std::int64_t cap = default_full_cap()) {
  BasisMatrix P;
  P.dim = dim;
  P.order = order;
  P.rows = level_size(dim, order);
  P.cols = full_size_checked(dim, order, cap);
  P.values.reserve(static_cast<std::size_t>(P.rows));
  P.columns.reserve(static_cast<std::size_t>(P.rows));
  for (std::int64_t i = 1; i <= P.rows; ++i) {
    auto support = sigma_set(dim, order, i, cap);
    P.values.push_back(1.0 / std::sqrt(static_cast<double>(support.size())));
    P.columns.push_back(std::move(support));
  }
  return P;
}

inline RealMatrix basis_dense(const BasisMatrix& P) {
  RealMatrix m = RealMatrix::Zero(P.rows, P.cols);
  for (std::int64_t i = 0; i < P.rows; ++i)
    for (std::int64_t j : P.columns[static_cast<std::size_t>(i)])
      m(i, j - 1) = P.values[static_cast<std::size_t>(i)];
  return m;
}

enum class CompressMode {
  strict_first,  // read the representative at the first position of sigma(i)
  average        // average over sigma(i); tolerant to noisy inputs
};

// Apply the basis matrix: component i is sqrt(#sigma(i)) times the distinct
// value.  Rejects inputs that fail the symmetry test.
inline SymVec compress(const FullVec& x, double tol = kSymmetryTol,
                       CompressMode mode = CompressMode::strict_first) {
  auto scan = detail::scan_symmetry(x, tol);
  if (!scan.symmetric)
    throw SymmetryError(
        "compress: components " + std::to_string(scan.offender_a) + " and " +
            std::to_string(scan.offender_b) + " differ by " +
            std::to_string(scan.max_abs_deviation),
        scan.offender_a, scan.offender_b);
  SymVec y = make_sym_vec(x.dim, x.order);
  const auto& source = (mode == CompressMode::strict_first)
                           ? scan.representatives
                           : scan.averages;
  for (std::size_t i = 0; i < y.data.size(); ++i) {
    double card = static_cast<double>(
        sigma_cardinality(x.dim, x.order, static_cast<std::int64_t>(i) + 1));
    y.data[i] = std::sqrt(card) * source[i];
  }
  return y;
}

// Adjoint of the basis matrix: spread y_i / sqrt(#sigma(i)) over sigma(i).
// The result is symmetric by construction.
inline FullVec expand(const SymVec& y, std::int64_t cap = default_full_cap()) {
  require_sym_shape(y, "expand");
  FullVec x = make_full_vec(y.dim, y.order, cap);
  std::int64_t ln = level_size(y.dim, y.order);
  std::vector<cplx> scaled(static_cast<std::size_t>(ln));
  for (std::int64_t i = 0; i < ln; ++i) {
    double card = static_cast<double>(sigma_cardinality(y.dim, y.order, i + 1));
    scaled[static_cast<std::size_t>(i)] =
        y.data[static_cast<std::size_t>(i)] / std::sqrt(card);
  }
  std::int64_t dn = full_size(y.dim, y.order);
  for (std::int64_t j = 1; j <= dn; ++j) {
    std::size_t r = static_cast<std::size_t>(
        lex_rank(y.dim, y.order, redundant_entry(y.dim, y.order, j)) - 1);
    x.data[static_cast<std::size_t>(j - 1)] = scaled[r];
  }
  return x;
}

// Plain label-coordinate maps (no sqrt scaling): replicate each distinct
// value across its sigma set, and read it back.
inline FullVec labels_to_full(const SymVec& labels,
                              std::int64_t cap = default_full_cap()) {
  require_sym_shape(labels, "labels_to_full");
  FullVec x = make_full_vec(labels.dim, labels.order, cap);
  std::int64_t dn = full_size(labels.dim, labels.order);
  for (std::int64_t j = 1; j <= dn; ++j) {
    std::size_t r = static_cast<std::size_t>(
        lex_rank(labels.dim, labels.order,
                 redundant_entry(labels.dim, labels.order, j)) -
        1);
    x.data[static_cast<std::size_t>(j - 1)] = labels.data[r];
  }
  return x;
}

inline SymVec full_to_labels(const FullVec& x, double tol = kSymmetryTol) {
  auto scan = detail::scan_symmetry(x, tol);
  if (!scan.symmetric)
    throw SymmetryError(
        "full_to_labels: components " + std::to_string(scan.offender_a) +
            " and " + std::to_string(scan.offender_b) + " differ",
        scan.offender_a, scan.offender_b);
  SymVec y = make_sym_vec(x.dim, x.order);
  y.data = scan.representatives;
  return y;
}

}  // namespace symkron
