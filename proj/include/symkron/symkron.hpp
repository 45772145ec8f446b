#pragma once

// Compressed application of the n-fold symmetric Kronecker product.
//
// For an output component labelled k, the closed formula sums over all
// tuples (alpha_1, ..., alpha_d) of multi-indices with |alpha_j| = k_j:
//
//   out_k = 1/sqrt(k!) * sum  prod_j [ binom(k_j, alpha_j) * m_j^alpha_j ]
//                        * sqrt(beta!) * y_beta,     beta = sum_j alpha_j,
//
// where m_j is the j-th row of the d x d matrix.  Everything runs in the
// compressed dimension L_n; no object of length d^n is ever allocated.
//
// The label-coordinate variant (no factorial scaling) gives the distinct
// components of the plain n-fold product acting on a symmetric vector.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "symkron/errors.hpp"
#include "symkron/matrix.hpp"
#include "symkron/multiindex.hpp"
#include "symkron/symspace.hpp"

namespace symkron {

namespace detail {

// sqrt(k!) per canonical entry of the level; exact integer factorials up
// to order 20, log-space beyond.
inline std::vector<double> sqrt_factorial_table(int dim, int order,
                                                bool log_space) {
  auto level = lex_enumerate(dim, order);
  std::vector<double> out(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (!log_space) {
      std::int64_t f = 1;
      for (int e : level[i])
        for (int t = 2; t <= e; ++t)
          f = checked_mul(f, t, "sqrt_factorial_table");
      out[i] = std::sqrt(static_cast<double>(f));
    } else {
      double lg = 0.0;
      for (int e : level[i]) lg += std::lgamma(static_cast<double>(e) + 1.0);
      out[i] = std::exp(0.5 * lg);
    }
  }
  return out;
}

constexpr int kFactorialLogSpaceOrder = 21;  // exact up to 20, 20! < 2^63

}  // namespace detail

// Combinatorial data shared by every operator of the same (dim, order):
// per-level enumerations, their multinomial weights, the factorial scale
// of the top level, and a Pascal triangle for O(d) ranking.  Built once,
// cached, immutable afterwards.
struct CompositionTables {
  int dim = 0;
  int order = 0;
  std::vector<std::vector<int>> level_entries;   // [m]: L_m * dim ints
  std::vector<std::int64_t> level_counts;        // L_m
  std::vector<std::vector<double>> level_weights;  // multinomial(m, alpha)
  std::vector<double> sqrt_factorial;            // at the top level
  std::vector<std::int64_t> pascal;              // binom(a, b), b <= dim
  int pascal_cols = 0;

  static std::shared_ptr<const CompositionTables> get(int dim, int order);

  std::int64_t choose(int a, int b) const {
    return pascal[static_cast<std::size_t>(a * pascal_cols + b)];
  }

  // 0-based canonical rank of a top-level multi-index given as raw ints
  std::int64_t rank0(const int* k) const {
    std::int64_t rank = 0;
    int remaining = order;
    for (int j = 0; j < dim - 1; ++j) {
      int gap = remaining - k[j] - 1;
      if (gap >= 0) rank += choose(gap + dim - 1 - j, dim - 1 - j);
      remaining -= k[j];
    }
    return rank;
  }

  std::int64_t top_count() const {
    return level_counts[static_cast<std::size_t>(order)];
  }

  std::int64_t element_count() const {
    std::int64_t total = static_cast<std::int64_t>(pascal.size()) +
                         static_cast<std::int64_t>(sqrt_factorial.size());
    for (const auto& e : level_entries)
      total += static_cast<std::int64_t>(e.size());
    for (const auto& w : level_weights)
      total += static_cast<std::int64_t>(w.size());
    return total;
  }
};

inline std::shared_ptr<const CompositionTables> CompositionTables::get(
    int dim, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>,
                  std::shared_ptr<const CompositionTables>>
      cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({dim, order});
    if (it != cache.end()) return it->second;
  }
  auto tables = std::make_shared<CompositionTables>();
  tables->dim = dim;
  tables->order = order;
  tables->level_entries.resize(static_cast<std::size_t>(order) + 1);
  tables->level_counts.resize(static_cast<std::size_t>(order) + 1);
  tables->level_weights.resize(static_cast<std::size_t>(order) + 1);
  for (int m = 0; m <= order; ++m) {
    auto level = lex_enumerate(dim, m);
    auto& flat = tables->level_entries[static_cast<std::size_t>(m)];
    auto& weights = tables->level_weights[static_cast<std::size_t>(m)];
    flat.reserve(level.size() * static_cast<std::size_t>(dim));
    weights.reserve(level.size());
    for (const auto& k : level) {
      flat.insert(flat.end(), k.begin(), k.end());
      weights.push_back(multinomial_double(m, k));
    }
    tables->level_counts[static_cast<std::size_t>(m)] =
        static_cast<std::int64_t>(level.size());
  }
  tables->sqrt_factorial = detail::sqrt_factorial_table(
      dim, order, order >= detail::kFactorialLogSpaceOrder);
  tables->pascal_cols = dim + 1;
  int pascal_rows = order + dim + 1;
  tables->pascal.assign(
      static_cast<std::size_t>(pascal_rows * tables->pascal_cols), 0);
  for (int a = 0; a < pascal_rows; ++a)
    for (int b = 0; b <= std::min(a, dim); ++b)
      tables->pascal[static_cast<std::size_t>(a * tables->pascal_cols + b)] =
          binomial(a, b);
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] =
      cache.emplace(std::make_pair(dim, order),
                    std::shared_ptr<const CompositionTables>(tables));
  return it->second;
}

namespace detail {

inline cplx monomial_direct(const cplx* row, const int* alpha, int dim) {
  cplx v{1.0};
  for (int t = 0; t < dim; ++t)
    for (int c = 0; c < alpha[t]; ++c) v *= row[t];
  return v;
}

// Monomials of one row along a level enumeration.  Consecutive entries
// usually differ by moving one unit between two coordinates, which updates
// the previous value with one multiply and one divide; other steps, zero
// divisors, and every 16th entry are recomputed directly so rounding does
// not accumulate along the chain.
inline std::vector<cplx> monomials_along_level(const cplx* row,
                                               const std::vector<int>& flat,
                                               int dim, bool incremental) {
  std::int64_t count = static_cast<std::int64_t>(flat.size()) / dim;
  std::vector<cplx> out(static_cast<std::size_t>(count));
  for (std::int64_t a = 0; a < count; ++a) {
    const int* alpha = flat.data() + a * dim;
    bool direct = !incremental || a == 0 || (a % 16 == 0);
    if (!direct) {
      const int* prev = alpha - dim;
      int from = -1, to = -1, changed = 0;
      for (int t = 0; t < dim; ++t) {
        int diff = alpha[t] - prev[t];
        if (diff == 0) continue;
        ++changed;
        if (diff == -1)
          from = t;
        else if (diff == 1)
          to = t;
        else
          changed = 3;  // multi-unit move, recompute
      }
      if (changed == 2 && from >= 0 && to >= 0 && row[from] != cplx{0.0}) {
        out[static_cast<std::size_t>(a)] =
            out[static_cast<std::size_t>(a - 1)] * row[to] / row[from];
        continue;
      }
    }
    out[static_cast<std::size_t>(a)] = monomial_direct(row, alpha, dim);
  }
  return out;
}

}  // namespace detail

struct OperatorStorageReport {
  std::int64_t table_elements = 0;    // shared combinatorial tables
  std::int64_t weight_elements = 0;   // per-operator weight tables
  std::int64_t apply_scratch_elements = 0;  // allocated per apply call
};

class SymKronOperator {
 public:
  SymKronOperator(const ComplexMatrix& m, int order,
                  bool incremental_monomials = true)
      : matrix_(m), order_(order) {
    if (m.rows() != m.cols())
      throw ShapeError("SymKronOperator: matrix must be square");
    dim_ = static_cast<int>(m.rows());
    if (dim_ < 1) throw ShapeError("SymKronOperator: empty matrix");
    if (order_ < 0) throw ShapeError("SymKronOperator: negative order");
    tables_ = CompositionTables::get(dim_, order_);
    weights_.resize(static_cast<std::size_t>(dim_));
    std::vector<cplx> row(static_cast<std::size_t>(dim_));
    for (int j = 0; j < dim_; ++j) {
      for (int t = 0; t < dim_; ++t) row[static_cast<std::size_t>(t)] = m(j, t);
      auto& per_level = weights_[static_cast<std::size_t>(j)];
      per_level.resize(static_cast<std::size_t>(order_) + 1);
      for (int lvl = 0; lvl <= order_; ++lvl) {
        const auto& flat = tables_->level_entries[static_cast<std::size_t>(lvl)];
        auto mono = detail::monomials_along_level(row.data(), flat, dim_,
                                                  incremental_monomials);
        const auto& weights =
            tables_->level_weights[static_cast<std::size_t>(lvl)];
        for (std::size_t a = 0; a < mono.size(); ++a) mono[a] *= weights[a];
        per_level[static_cast<std::size_t>(lvl)] = std::move(mono);
      }
    }
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::int64_t size() const { return tables_->top_count(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  // Orthonormal-coordinate action (with the factorial scaling).
  SymVec apply(const SymVec& y) const { return run(y, true); }

  // Label-coordinate action of the plain n-fold product.
  SymVec apply_labels(const SymVec& x) const { return run(x, false); }

  // Dense form, assembled column-by-column from basis vectors.
  ComplexMatrix materialize(std::int64_t max_size = 2048) const {
    std::int64_t ln = size();
    if (ln > max_size)
      throw SizeError("materialize: L_n = " + std::to_string(ln) +
                      " exceeds the memory budget " + std::to_string(max_size));
    ComplexMatrix out(ln, ln);
    SymVec basis = make_sym_vec(dim_, order_);
    for (std::int64_t i = 0; i < ln; ++i) {
      basis.data.assign(basis.data.size(), cplx{0.0});
      basis.data[static_cast<std::size_t>(i)] = cplx{1.0};
      SymVec column = apply(basis);
      for (std::int64_t r = 0; r < ln; ++r)
        out(r, i) = column.data[static_cast<std::size_t>(r)];
    }
    return out;
  }

  OperatorStorageReport storage() const {
    OperatorStorageReport report;
    report.table_elements = tables_->element_count();
    for (const auto& per_level : weights_)
      for (const auto& w : per_level)
        report.weight_elements += static_cast<std::int64_t>(w.size());
    report.apply_scratch_elements = size() + dim_;
    return report;
  }

 private:
  SymVec run(const SymVec& input, bool orthonormal) const {
    if (input.dim != dim_ || input.order != order_)
      throw ShapeError("apply: vector does not match the operator's (dim, order)");
    require_sym_shape(input, "apply");
    SymVec out = make_sym_vec(dim_, order_);
    const auto& top =
        tables_->level_entries[static_cast<std::size_t>(order_)];
    std::vector<int> beta(static_cast<std::size_t>(dim_), 0);
    for (std::int64_t i = 0; i < size(); ++i) {
      const int* k = top.data() + i * dim_;
      double out_scale =
          orthonormal ? tables_->sqrt_factorial[static_cast<std::size_t>(i)]
                      : 1.0;
      out.data[static_cast<std::size_t>(i)] = accumulate(
          0, k, cplx{1.0}, beta.data(), input.data.data(),
          orthonormal ? &out_scale : nullptr);
    }
    return out;
  }

  cplx accumulate(int axis, const int* k, cplx weight, int* beta,
                  const cplx* input, const double* out_scale) const {
    if (axis == dim_) {
      std::int64_t r = tables_->rank0(beta);
      cplx v = weight * input[r];
      // the ratio is exactly one on the diagonal path beta == k
      if (out_scale)
        v *= tables_->sqrt_factorial[static_cast<std::size_t>(r)] / *out_scale;
      return v;
    }
    int lvl = k[axis];
    const auto& flat = tables_->level_entries[static_cast<std::size_t>(lvl)];
    const auto& w =
        weights_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(lvl)];
    std::int64_t count = tables_->level_counts[static_cast<std::size_t>(lvl)];
    cplx acc{0.0};
    for (std::int64_t a = 0; a < count; ++a) {
      cplx next = weight * w[static_cast<std::size_t>(a)];
      if (next == cplx{0.0}) continue;  // zero entries prune whole branches
      const int* alpha = flat.data() + a * dim_;
      for (int t = 0; t < dim_; ++t) beta[t] += alpha[t];
      acc += accumulate(axis + 1, k, next, beta, input, out_scale);
      for (int t = 0; t < dim_; ++t) beta[t] -= alpha[t];
    }
    return acc;
  }

  ComplexMatrix matrix_;
  int dim_ = 0;
  int order_ = 0;
  std::shared_ptr<const CompositionTables> tables_;
  // weights_[axis][level][a] = multinomial(level, alpha_a) * row_axis^alpha_a
  std::vector<std::vector<std::vector<cplx>>> weights_;
};

// Distinct components of the plain n-fold product acting on a symmetric
// vector given in label coordinates.
inline SymVec apply_kron_compressed(const ComplexMatrix& m, int order,
                                    const SymVec& labels) {
  return SymKronOperator(m, order).apply_labels(labels);
}

inline ComplexMatrix materialize(const ComplexMatrix& m, int order,
                                 std::int64_t max_size = 2048) {
  return SymKronOperator(m, order).materialize(max_size);
}

// Structural residuals, all computed from materialized compressed forms.

struct StructuralCheck {
  double residual = 0.0;  // Frobenius norm of the defect
  double scale = 1.0;     // Frobenius norm of the reference object
  double condition = 0.0;
};

inline StructuralCheck check_adjoint(const ComplexMatrix& m, int order) {
  ComplexMatrix lhs = SymKronOperator(ComplexMatrix(m.adjoint()), order)
                          .materialize();
  ComplexMatrix rhs = SymKronOperator(m, order).materialize();
  StructuralCheck out;
  out.residual = (lhs - rhs.adjoint()).norm();
  out.scale = lhs.norm();
  return out;
}

inline StructuralCheck check_inverse(const ComplexMatrix& m, int order) {
  StructuralCheck out;
  out.condition = condition_number(m);
  if (!std::isfinite(out.condition) || out.condition > 1e12)
    throw SingularMatrixError(
        "check_inverse: matrix is numerically singular (condition " +
        std::to_string(out.condition) + ")");
  ComplexMatrix minv = Eigen::MatrixXcd(m).inverse();
  ComplexMatrix s = SymKronOperator(m, order).materialize();
  ComplexMatrix sinv = SymKronOperator(minv, order).materialize();
  std::int64_t ln = s.rows();
  out.residual = (s * sinv - complex_identity(ln)).norm();
  out.scale = std::sqrt(static_cast<double>(ln));
  return out;
}

inline StructuralCheck check_unitary(const ComplexMatrix& u, int order) {
  ComplexMatrix s = SymKronOperator(u, order).materialize();
  StructuralCheck out;
  out.residual = (s.adjoint() * s - complex_identity(s.rows())).norm();
  out.scale = std::sqrt(static_cast<double>(s.rows()));
  return out;
}

}  // namespace symkron
