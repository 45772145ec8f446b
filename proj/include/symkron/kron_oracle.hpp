#pragma once

// Dense, exponential-cost reference implementations used only to validate
// the compressed path.  Everything here is written as plain loops over
// explicit objects; no shortcut that the compressed code also relies on.
//
// Two regimes, both capped:
//   * explicit matrix build of the n-fold product, d^n <= 2^12,
//   * mode products against the full vector, d^n <= 2^20.

#include <cstdint>
#include <string>
#include <vector>

#include "symkron/errors.hpp"
#include "symkron/matrix.hpp"
#include "symkron/symspace.hpp"

namespace symkron::oracle {

constexpr std::int64_t kExplicitBuildCap = std::int64_t{1} << 12;
constexpr std::int64_t kModeProductCap = std::int64_t{1} << 20;

// Standard Kronecker product: block (i, j) equals a_ij * B.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  std::int64_t rows = detail::checked_mul(a.rows(), b.rows(), "kron rows");
  std::int64_t cols = detail::checked_mul(a.cols(), b.cols(), "kron cols");
  if (detail::checked_mul(rows, cols, "kron size") > (std::int64_t{1} << 26))
    throw SizeError("kron: result of size " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " exceeds the oracle cap");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index p = 0; p < b.rows(); ++p)
        for (Eigen::Index q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

// The n-fold product assembled literally by repeated kron.
inline ComplexMatrix iterated_kron_matrix(const ComplexMatrix& m, int order) {
  if (m.rows() != m.cols()) throw ShapeError("iterated_kron_matrix: not square");
  int d = static_cast<int>(m.rows());
  std::int64_t dn = full_size(d, order);
  if (dn > kExplicitBuildCap)
    throw SizeError("iterated_kron_matrix: d^n = " + std::to_string(dn) +
                    " exceeds the explicit-build cap " +
                    std::to_string(kExplicitBuildCap));
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < order; ++i) out = kron(out, m);
  return out;
}

// Apply the n-fold product through n successive mode contractions of the
// full vector viewed as a d x ... x d array (first factor most significant).
inline FullVec iterated_kron_apply(const ComplexMatrix& m, int order,
                                   const FullVec& x) {
  if (m.rows() != m.cols()) throw ShapeError("iterated_kron_apply: not square");
  int d = static_cast<int>(m.rows());
  if (x.dim != d || x.order != order)
    throw ShapeError("iterated_kron_apply: vector does not match (dim, order)");
  std::int64_t dn = full_size(d, order);
  if (dn > kModeProductCap)
    throw SizeError("iterated_kron_apply: d^n = " + std::to_string(dn) +
                    " exceeds the mode-product cap " +
                    std::to_string(kModeProductCap));
  require_full_shape(x, "iterated_kron_apply");
  std::vector<cplx> cur = x.data;
  std::vector<cplx> nxt(cur.size());
  for (int mode = 0; mode < order; ++mode) {
    // flat index = outer * (d * stride) + axis * stride + inner
    std::int64_t stride = 1;
    for (int t = mode + 1; t < order; ++t) stride *= d;
    std::int64_t outer_count = dn / (stride * d);
    for (std::int64_t outer = 0; outer < outer_count; ++outer)
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        std::int64_t base = outer * stride * d + inner;
        for (int i = 0; i < d; ++i) {
          cplx acc{0.0};
          for (int j = 0; j < d; ++j)
            acc += m(i, j) * cur[static_cast<std::size_t>(base + j * stride)];
          nxt[static_cast<std::size_t>(base + i * stride)] = acc;
        }
      }
    cur.swap(nxt);
  }
  FullVec out;
  out.dim = d;
  out.order = order;
  out.data = std::move(cur);
  return out;
}

// Dense compressed product assembled literally: the basis matrix, the
// explicit n-fold product, and the adjoint basis matrix multiplied out.
inline ComplexMatrix symmetric_kron_dense(const ComplexMatrix& m, int order) {
  if (m.rows() != m.cols())
    throw ShapeError("symmetric_kron_dense: not square");
  int d = static_cast<int>(m.rows());
  ComplexMatrix k = iterated_kron_matrix(m, order);
  BasisMatrix P = build_P(d, order, kExplicitBuildCap);
  std::int64_t ln = P.rows;
  std::int64_t dn = P.cols;
  // rows of P are real with a single value on known columns
  ComplexMatrix pk(ln, dn);
  for (std::int64_t i = 0; i < ln; ++i)
    for (std::int64_t c = 0; c < dn; ++c) {
      cplx acc{0.0};
      for (std::int64_t j : P.columns[static_cast<std::size_t>(i)])
        acc += k(j - 1, c);
      pk(i, c) = P.values[static_cast<std::size_t>(i)] * acc;
    }
  ComplexMatrix s(ln, ln);
  for (std::int64_t i = 0; i < ln; ++i)
    for (std::int64_t ip = 0; ip < ln; ++ip) {
      cplx acc{0.0};
      for (std::int64_t j : P.columns[static_cast<std::size_t>(ip)])
        acc += pk(i, j - 1);
      s(i, ip) = P.values[static_cast<std::size_t>(ip)] * acc;
    }
  return s;
}

}  // namespace symkron::oracle
