#include <doctest.h>

#include <thread>

#include "symkron/kron_oracle.hpp"
#include "symkron/prng.hpp"
#include "symkron/symkron.hpp"

using namespace symkron;

namespace {

double rel_diff(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

SymVec random_sym_vec(int d, int n, SplitMix64& rng) {
  SymVec y = make_sym_vec(d, n);
  for (auto& v : y.data) v = rng.complex_normal();
  return y;
}

}  // namespace

TEST_CASE("order one reduces to the ordinary matrix-vector product") {
  SplitMix64 rng(1);
  ComplexMatrix m = random_complex_matrix(3, rng);
  SymVec y = random_sym_vec(3, 1, rng);
  SymVec got = SymKronOperator(m, 1).apply(y);
  SymVec labels = SymKronOperator(m, 1).apply_labels(y);
  for (int i = 0; i < 3; ++i) {
    cplx acc{0.0};
    for (int j = 0; j < 3; ++j)
      acc += m(i, j) * y.data[static_cast<std::size_t>(j)];
    CHECK(std::abs(got.data[static_cast<std::size_t>(i)] - acc) < 1e-14);
    CHECK(std::abs(labels.data[static_cast<std::size_t>(i)] - acc) < 1e-14);
  }
}

TEST_CASE("identity operator leaves vectors unchanged") {
  SplitMix64 rng(2);
  for (int d = 1; d <= 3; ++d)
    for (int n = 0; n <= 4; ++n) {
      SymVec y = random_sym_vec(d, n, rng);
      SymVec got = SymKronOperator(complex_identity(d), n).apply(y);
      for (std::size_t i = 0; i < y.data.size(); ++i)
        CHECK(got.data[i] == y.data[i]);
      SymVec lab = apply_kron_compressed(complex_identity(d), n, y);
      for (std::size_t i = 0; i < y.data.size(); ++i)
        CHECK(lab.data[i] == y.data[i]);
    }
}

TEST_CASE("basis-vector image matches the hand-derived column") {
  cplx a{0.8, 0.1}, b{-1.2, 0.4}, c{0.3, -0.9}, d{1.1, 0.6};
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  SymVec e1{2, 2, {cplx{1.0}, cplx{0.0}, cplx{0.0}}};
  SymVec col = SymKronOperator(m, 2).apply(e1);
  CHECK(std::abs(col.data[0] - a * a) < 1e-14);
  CHECK(std::abs(col.data[1] - std::sqrt(2.0) * a * c) < 1e-14);
  CHECK(std::abs(col.data[2] - c * c) < 1e-14);
}

TEST_CASE("compressed apply equals the dense oracle") {
  SplitMix64 rng(42);
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 5; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix m = random_matrix_unit_norm(d, rng);
        SymVec y = random_sym_vec(d, n, rng);
        SymVec got = SymKronOperator(m, n).apply(y);
        ComplexMatrix s = oracle::symmetric_kron_dense(m, n);
        std::vector<cplx> want(y.data.size());
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
          cplx acc{0.0};
          for (Eigen::Index j = 0; j < s.cols(); ++j)
            acc += s(i, j) * y.data[static_cast<std::size_t>(j)];
          want[static_cast<std::size_t>(i)] = acc;
        }
        CHECK(rel_diff(got.data, want) < 1e-12);
      }
}

TEST_CASE("label-coordinate apply equals the oracle through the full space") {
  SplitMix64 rng(43);
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 4; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix m = random_matrix_unit_norm(d, rng);
        SymVec x = random_sym_vec(d, n, rng);
        SymVec got = apply_kron_compressed(m, n, x);
        FullVec full = labels_to_full(x);
        FullVec image = oracle::iterated_kron_apply(m, n, full);
        SymVec want = full_to_labels(image, 1e-10);
        CHECK(rel_diff(got.data, want.data) < 1e-12);
      }
}

TEST_CASE("materialize matches the dense oracle and the identity case") {
  SplitMix64 rng(44);
  ComplexMatrix m = random_matrix_unit_norm(3, rng);
  ComplexMatrix fast = materialize(m, 3);
  ComplexMatrix slow = oracle::symmetric_kron_dense(m, 3);
  CHECK((fast - slow).norm() / slow.norm() < 1e-12);

  ComplexMatrix id = materialize(complex_identity(4), 3);
  CHECK((id - complex_identity(level_size(4, 3))).cwiseAbs().maxCoeff() == 0.0);

  cplx a{0.8, 0.1}, b{-1.2, 0.4}, c{0.3, -0.9}, d{1.1, 0.6};
  ComplexMatrix m2(2, 2);
  m2 << a, b, c, d;
  ComplexMatrix s2 = materialize(m2, 2);
  double r2 = std::sqrt(2.0);
  ComplexMatrix expected(3, 3);
  expected << a * a, r2 * a * b, b * b,
              r2 * a * c, a * d + b * c, r2 * b * d,
              c * c, r2 * c * d, d * d;
  CHECK((s2 - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("diagonal matrices scale each label by its monomial, exactly") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = cplx{2.0};
  m(1, 1) = cplx{0.5};
  m(2, 2) = cplx{-1.0};
  int n = 4;
  SymKronOperator op(m, n);
  auto level = lex_enumerate(3, n);
  SymVec y = make_sym_vec(3, n);
  SplitMix64 rng(45);
  for (auto& v : y.data) v = rng.complex_normal();
  SymVec got = op.apply(y);
  for (std::size_t i = 0; i < level.size(); ++i) {
    cplx scale{1.0};
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < level[i][static_cast<std::size_t>(j)]; ++c)
        scale *= m(j, j);
    CHECK(got.data[i] == scale * y.data[i]);  // single-term sum, bitwise
  }
}

TEST_CASE("multiplicativity of the compressed operators") {
  SplitMix64 rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + (trial % 2);
    int n = 1 + (trial % 5);
    ComplexMatrix a = random_matrix_unit_norm(d, rng);
    ComplexMatrix b = random_matrix_unit_norm(d, rng);
    SymVec y = random_sym_vec(d, n, rng);
    SymVec two = SymKronOperator(a, n).apply(SymKronOperator(b, n).apply(y));
    SymVec one = SymKronOperator(ComplexMatrix(a * b), n).apply(y);
    CHECK(rel_diff(two.data, one.data) < 1e-11);
  }
}

TEST_CASE("adjoint, inverse, and unitary structure") {
  SplitMix64 rng(47);
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 5; ++n) {
      ComplexMatrix m = random_matrix_unit_norm(d, rng);
      CHECK(check_adjoint(m, n).residual < 1e-12);

      ComplexMatrix w = random_matrix_conditioned(d, rng);
      StructuralCheck inv = check_inverse(w, n);
      CHECK(inv.condition < 1e3);
      CHECK(inv.residual < 1e-10);

      ComplexMatrix u = random_unitary(d, rng);
      CHECK(check_unitary(u, n).residual < 1e-12);
    }
  // the compressed form of a unitary is unitary at larger order too
  ComplexMatrix u = random_unitary(3, rng);
  CHECK(check_unitary(u, 4).residual < 1e-12);
}

TEST_CASE("inverse check refuses singular input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = cplx{1.0};
  CHECK_THROWS_AS(check_inverse(m, 2), SingularMatrixError);
}

TEST_CASE("incremental monomial tables agree with direct evaluation") {
  SplitMix64 rng(48);
  for (int d = 2; d <= 4; ++d)
    for (int lvl = 0; lvl <= 7; ++lvl) {
      std::vector<cplx> row(static_cast<std::size_t>(d));
      for (auto& v : row) v = rng.complex_normal();
      if (lvl % 3 == 0 && d > 2) row[1] = cplx{0.0};  // exercise zero divisors
      auto flat_level = lex_enumerate(d, lvl);
      std::vector<int> flat;
      for (const auto& k : flat_level) flat.insert(flat.end(), k.begin(), k.end());
      auto inc = detail::monomials_along_level(row.data(), flat, d, true);
      auto dir = detail::monomials_along_level(row.data(), flat, d, false);
      for (std::size_t a = 0; a < inc.size(); ++a) {
        double scale = std::max(1.0, std::abs(dir[a]));
        CHECK(std::abs(inc[a] - dir[a]) <= 1e-14 * scale);
      }
    }
}

TEST_CASE("operators built from either monomial path agree") {
  SplitMix64 rng(49);
  ComplexMatrix m = random_complex_matrix(3, rng);
  SymVec y = random_sym_vec(3, 5, rng);
  SymVec a = SymKronOperator(m, 5, true).apply(y);
  SymVec b = SymKronOperator(m, 5, false).apply(y);
  CHECK(rel_diff(a.data, b.data) < 1e-13);
}

TEST_CASE("factorial table crossover is consistent at order 20") {
  for (int d = 2; d <= 3; ++d) {
    auto exact = detail::sqrt_factorial_table(d, 20, false);
    auto logs = detail::sqrt_factorial_table(d, 20, true);
    for (std::size_t i = 0; i < exact.size(); ++i)
      CHECK(std::abs(exact[i] - logs[i]) <= 1e-13 * exact[i]);
  }
}

TEST_CASE("auxiliary storage stays near the compressed dimension") {
  SplitMix64 rng(50);
  ComplexMatrix m = random_matrix_unit_norm(3, rng);
  SymKronOperator op(m, 10);
  std::int64_t ln = level_size(3, 10);
  std::int64_t dn = full_size(3, 10);
  REQUIRE(ln == 66);
  REQUIRE(dn == 59049);
  OperatorStorageReport rep = op.storage();
  std::int64_t total =
      rep.table_elements + rep.weight_elements + rep.apply_scratch_elements;
  CHECK(total <= 64 * (ln + 3 * 3));
  CHECK(total < dn);
  SymVec y = random_sym_vec(3, 10, rng);
  SymVec out = op.apply(y);  // must complete without touching d^n storage
  CHECK(out.data.size() == static_cast<std::size_t>(ln));
}

TEST_CASE("composition tables are shared between same-shape operators") {
  auto a = CompositionTables::get(3, 4);
  auto b = CompositionTables::get(3, 4);
  CHECK(a.get() == b.get());
  CHECK(a.get() != CompositionTables::get(3, 5).get());
}

TEST_CASE("a shared operator is safe to apply concurrently") {
  SplitMix64 rng(52);
  ComplexMatrix m = random_matrix_unit_norm(3, rng);
  SymKronOperator op(m, 4);
  std::vector<SymVec> inputs;
  for (int t = 0; t < 8; ++t) inputs.push_back(random_sym_vec(3, 4, rng));
  std::vector<SymVec> sequential;
  for (const auto& y : inputs) sequential.push_back(op.apply(y));

  std::vector<SymVec> threaded(inputs.size());
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < inputs.size(); ++t)
    workers.emplace_back(
        [&, t] { threaded[t] = op.apply(inputs[t]); });
  for (auto& w : workers) w.join();
  for (std::size_t t = 0; t < inputs.size(); ++t)
    for (std::size_t i = 0; i < sequential[t].data.size(); ++i)
      CHECK(threaded[t].data[i] == sequential[t].data[i]);
}

TEST_CASE("large orders run through the log-space factorial tables") {
  SplitMix64 rng(53);
  int n = 22;  // above the exact-factorial crossover
  ComplexMatrix u1 = random_unitary(2, rng);
  ComplexMatrix u2 = random_unitary(2, rng);
  SymVec y = random_sym_vec(2, n, rng);
  SymVec two = SymKronOperator(u1, n).apply(SymKronOperator(u2, n).apply(y));
  SymVec one = SymKronOperator(ComplexMatrix(u1 * u2), n).apply(y);
  CHECK(rel_diff(two.data, one.data) < 1e-11);

  // diagonal scaling stays a single-term sum at any order
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = cplx{0.5};
  diag(1, 1) = cplx{2.0};
  SymVec scaled = SymKronOperator(diag, n).apply(y);
  auto level = lex_enumerate(2, n);
  for (std::size_t i = 0; i < level.size(); ++i) {
    cplx want = y.data[i];
    for (int c = 0; c < level[i][0]; ++c) want *= 0.5;
    for (int c = 0; c < level[i][1]; ++c) want *= 2.0;
    CHECK(scaled.data[i] == want);
  }
}

TEST_CASE("order zero is the scalar identity operator") {
  SplitMix64 rng(51);
  ComplexMatrix m = random_complex_matrix(3, rng);
  SymVec y{3, 0, {cplx{1.25, -0.5}}};
  SymVec got = SymKronOperator(m, 0).apply(y);
  CHECK(got.data[0] == y.data[0]);
}

TEST_CASE("shape mismatches are rejected") {
  ComplexMatrix m = complex_identity(2);
  SymKronOperator op(m, 3);
  SymVec wrong{2, 2, {cplx{1}, cplx{0}, cplx{0}}};
  CHECK_THROWS_AS(op.apply(wrong), ShapeError);
  SymVec short_vec{2, 3, {cplx{1}}};
  CHECK_THROWS_AS(op.apply(short_vec), ShapeError);
  CHECK_THROWS_AS(SymKronOperator(complex_identity(4), 40).materialize(),
                  SizeError);  // L_n = 12341 exceeds the default budget
}
