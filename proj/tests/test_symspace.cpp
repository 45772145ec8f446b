#include <doctest.h>

#include <cmath>

#include "symkron/prng.hpp"
#include "symkron/symspace.hpp"

using namespace symkron;

namespace {

FullVec random_symmetric(int d, int n, SplitMix64& rng) {
  SymVec labels = make_sym_vec(d, n);
  for (auto& v : labels.data) v = rng.complex_normal();
  return labels_to_full(labels);
}

double max_abs(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("is_symmetric on the listed membership examples") {
  FullVec x{2, 2, {cplx{1}, cplx{5}, cplx{5}, cplx{9}}};
  CHECK(is_symmetric(x));
  FullVec y{2, 2, {cplx{1}, cplx{5}, cplx{4}, cplx{9}}};
  CHECK_FALSE(is_symmetric(y));

  // order three: positions {2,3,5} and {4,6,7} must agree
  FullVec z = make_full_vec(2, 3);
  z.data = {cplx{1}, cplx{2}, cplx{2}, cplx{3},
            cplx{2}, cplx{3}, cplx{3}, cplx{4}};
  CHECK(is_symmetric(z));
  z.data[4] = cplx{2.5};
  CHECK_FALSE(is_symmetric(z));

  FullVec zero = make_full_vec(2, 3);
  CHECK(is_symmetric(zero));
}

TEST_CASE("basis vectors have unit norm and the right support") {
  FullVec p2 = basis_vector(2, 3, 2);
  double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (std::int64_t j = 1; j <= 8; ++j) {
    bool in_support = (j == 2 || j == 3 || j == 5);
    CHECK(p2.data[static_cast<std::size_t>(j - 1)] ==
          (in_support ? cplx{inv_sqrt3} : cplx{0.0}));
  }
  FullVec p1 = basis_vector(2, 3, 1);
  CHECK(p1.data[0] == cplx{1.0});
  for (std::size_t j = 1; j < 8; ++j) CHECK(p1.data[j] == cplx{0.0});

  for (int n = 1; n <= 4; ++n) {
    std::int64_t ln = level_size(2, n);
    for (std::int64_t i = 1; i <= ln; ++i)
      for (std::int64_t ip = 1; ip <= ln; ++ip) {
        cplx dot{0.0};
        FullVec a = basis_vector(2, n, i);
        FullVec b = basis_vector(2, n, ip);
        for (std::size_t j = 0; j < a.data.size(); ++j)
          dot += std::conj(a.data[j]) * b.data[j];
        CHECK(std::abs(dot - (i == ip ? cplx{1.0} : cplx{0.0})) < 1e-14);
      }
  }
}

TEST_CASE("build_P reproduces the displayed matrices") {
  BasisMatrix P2 = build_P(2, 2);
  REQUIRE(P2.rows == 3);
  REQUIRE(P2.cols == 4);
  double s2 = 1.0 / std::sqrt(2.0);
  RealMatrix D2 = basis_dense(P2);
  RealMatrix E2(3, 4);
  E2 << 1, 0, 0, 0, 0, s2, s2, 0, 0, 0, 0, 1;
  CHECK((D2 - E2).cwiseAbs().maxCoeff() == 0.0);

  BasisMatrix P3 = build_P(2, 3);
  REQUIRE(P3.rows == 4);
  REQUIRE(P3.cols == 8);
  double s3 = 1.0 / std::sqrt(3.0);
  RealMatrix D3 = basis_dense(P3);
  RealMatrix E3(4, 8);
  E3 << 1, 0, 0, 0, 0, 0, 0, 0,
        0, s3, s3, 0, s3, 0, 0, 0,
        0, 0, 0, s3, 0, s3, s3, 0,
        0, 0, 0, 0, 0, 0, 0, 1;
  CHECK((D3 - E3).cwiseAbs().maxCoeff() == 0.0);

  BasisMatrix P1 = build_P(1, 5);
  CHECK(P1.rows == 1);
  CHECK(P1.cols == 1);
  CHECK(P1.values[0] == 1.0);
}

TEST_CASE("rows of P are orthonormal") {
  for (int d = 1; d <= 3; ++d)
    for (int n = 0; n <= 5; ++n) {
      RealMatrix D = basis_dense(build_P(d, n));
      RealMatrix G = D * D.transpose();
      RealMatrix I = RealMatrix::Identity(D.rows(), D.rows());
      CHECK((G - I).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("row i of P has multinomial(n, k_i) nonzeros") {
  for (int d = 2; d <= 3; ++d)
    for (int n = 0; n <= 4; ++n) {
      BasisMatrix P = build_P(d, n);
      auto level = lex_enumerate(d, n);
      for (std::int64_t i = 0; i < P.rows; ++i)
        CHECK(static_cast<std::int64_t>(
                  P.columns[static_cast<std::size_t>(i)].size()) ==
              multinomial(n, level[static_cast<std::size_t>(i)]));
    }
}

TEST_CASE("compress applies the closed formula") {
  cplx a{1.0, 2.0}, b{-0.5, 0.25}, c{3.0, -1.0};
  FullVec x{2, 2, {a, b, b, c}};
  SymVec y = compress(x);
  CHECK(std::abs(y.data[0] - a) < 1e-15);
  CHECK(std::abs(y.data[1] - std::sqrt(2.0) * b) < 1e-15);
  CHECK(std::abs(y.data[2] - c) < 1e-15);

  FullVec scalar{1, 3, {cplx{4.0, -2.0}}};
  CHECK(compress(scalar).data[0] == cplx{4.0, -2.0});
}

TEST_CASE("compress equals the dense basis product") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    FullVec x = random_symmetric(3, 3, rng);
    SymVec y = compress(x);
    RealMatrix D = basis_dense(build_P(3, 3));
    for (std::int64_t i = 0; i < D.rows(); ++i) {
      cplx dot{0.0};
      for (std::int64_t j = 0; j < D.cols(); ++j)
        dot += D(i, j) * x.data[static_cast<std::size_t>(j)];
      CHECK(std::abs(dot - y.data[static_cast<std::size_t>(i)]) < 1e-13);
    }
  }
}

TEST_CASE("compress rejects non-symmetric input with the offending pair") {
  FullVec x{2, 2, {cplx{1}, cplx{5}, cplx{4}, cplx{9}}};
  try {
    compress(x);
    FAIL("expected SymmetryError");
  } catch (const SymmetryError& e) {
    CHECK(e.index_a == 2);
    CHECK(e.index_b == 3);
  }
}

TEST_CASE("compress average mode smooths noisy inputs") {
  FullVec x{2, 2, {cplx{1}, cplx{5.0 + 1e-14}, cplx{5.0 - 1e-14}, cplx{9}}};
  SymVec strict = compress(x, 1e-12, CompressMode::strict_first);
  SymVec avg = compress(x, 1e-12, CompressMode::average);
  CHECK(strict.data[1] == std::sqrt(2.0) * cplx{5.0 + 1e-14});
  CHECK(std::abs(avg.data[1] - std::sqrt(2.0) * cplx{5.0}) < 1e-15);
}

TEST_CASE("expand applies the adjoint formula and lands in the subspace") {
  cplx a{2.0, 1.0}, b{0.5, -3.0}, c{-1.0, 0.0};
  SymVec y{2, 2, {a, b, c}};
  FullVec x = expand(y);
  CHECK(x.data[0] == a);
  CHECK(std::abs(x.data[1] - b / std::sqrt(2.0)) < 1e-16);
  CHECK(x.data[1] == x.data[2]);
  CHECK(x.data[3] == c);
  CHECK(is_symmetric(x, 0.0));
}

TEST_CASE("compress-expand round trips") {
  SplitMix64 rng(99);
  for (int d = 1; d <= 3; ++d)
    for (int n = 0; n <= 5; ++n) {
      SymVec y = make_sym_vec(d, n);
      for (auto& v : y.data) v = rng.complex_normal();
      SymVec back = compress(expand(y));
      CHECK(max_abs(back.data, y.data) < 1e-14);

      FullVec x = random_symmetric(d, std::min(n, 4), rng);
      FullVec forth = expand(compress(x));
      CHECK(max_abs(forth.data, x.data) < 1e-14);
    }
}

TEST_CASE("label coordinate maps are mutually inverse") {
  SplitMix64 rng(7);
  for (int d = 2; d <= 3; ++d) {
    SymVec labels = make_sym_vec(d, 3);
    for (auto& v : labels.data) v = rng.complex_normal();
    FullVec x = labels_to_full(labels);
    CHECK(is_symmetric(x, 0.0));
    SymVec back = full_to_labels(x);
    CHECK(max_abs(back.data, labels.data) == 0.0);
  }
}

TEST_CASE("order-two expansions are fixed by the transposition permutation") {
  // permuting the two base-d digit positions of the redundant order must
  // leave any expanded vector unchanged
  SplitMix64 rng(31337);
  for (int d = 2; d <= 4; ++d) {
    SymVec y = make_sym_vec(d, 2);
    for (auto& v : y.data) v = rng.complex_normal();
    FullVec x = expand(y);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(x.data[static_cast<std::size_t>(i * d + j)] ==
              x.data[static_cast<std::size_t>(j * d + i)]);
  }
}

TEST_CASE("order zero is the scalar identity") {
  SymVec y{3, 0, {cplx{2.5, -1.5}}};
  FullVec x = expand(y);
  CHECK(x.data.size() == 1);
  CHECK(x.data[0] == y.data[0]);
  CHECK(compress(x).data[0] == y.data[0]);
}
