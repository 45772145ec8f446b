// Acceptance suite: every criterion below is pinned to its tolerance in
// code and reported as a single PASS/FAIL line.  The binary exits nonzero
// if any criterion fails.  argv[1] must point at the command-line tool,
// which criterion 10 spawns to verify the oracle-route refusal.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "symkron/hagedorn.hpp"
#include "symkron/json_io.hpp"
#include "symkron/kron_oracle.hpp"
#include "symkron/prng.hpp"
#include "symkron/symkron.hpp"

using namespace symkron;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("%s | criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v) { return io::format_double(v); }

// ------------------------------------------------------------ criterion 1

void criterion_1_listed_objects() {
  auto t0 = clock_type::now();
  bool ok = true;
  std::string why;

  auto expect = [&](bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  };

  using L = std::vector<MultiIndex>;
  expect(lex_enumerate(2, 2) == L{{2, 0}, {1, 1}, {0, 2}}, "order-2 list");
  expect(lex_enumerate(2, 3) == L{{3, 0}, {2, 1}, {1, 2}, {0, 3}},
         "order-3 list");

  L nu1, nu2, nu3;
  for (std::int64_t j = 1; j <= 2; ++j) nu1.push_back(redundant_entry(2, 1, j));
  for (std::int64_t j = 1; j <= 4; ++j) nu2.push_back(redundant_entry(2, 2, j));
  for (std::int64_t j = 1; j <= 8; ++j) nu3.push_back(redundant_entry(2, 3, j));
  expect(nu1 == L{{1, 0}, {0, 1}}, "redundant order-1 list");
  expect(nu2 == L{{2, 0}, {1, 1}, {1, 1}, {0, 2}}, "redundant order-2 list");
  expect(nu3 == L{{3, 0}, {2, 1}, {2, 1}, {1, 2}, {2, 1}, {1, 2}, {1, 2},
                  {0, 3}},
         "redundant order-3 list");

  using S = std::vector<std::int64_t>;
  expect(sigma_set(2, 2, 1) == S{1} && sigma_set(2, 2, 2) == S{2, 3} &&
             sigma_set(2, 2, 3) == S{4},
         "order-2 partition");
  expect(sigma_set(2, 3, 1) == S{1} && sigma_set(2, 3, 2) == S{2, 3, 5} &&
             sigma_set(2, 3, 3) == S{4, 6, 7} && sigma_set(2, 3, 4) == S{8},
         "order-3 partition");

  // table of the order-3 basis: labels, vectors, tensor coordinates, counts
  const S counts{1, 3, 3, 1};
  const std::vector<S> supports{{1}, {2, 3, 5}, {4, 6, 7}, {8}};
  const std::vector<std::set<std::vector<int>>> tensor_coords{
      {{1, 1, 1}},
      {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}},
      {{2, 2, 1}, {2, 1, 2}, {1, 2, 2}},
      {{2, 2, 2}}};
  for (std::int64_t i = 1; i <= 4; ++i) {
    expect(sigma_cardinality(2, 3, i) == counts[static_cast<std::size_t>(i - 1)],
           "table count column");
    auto support = sigma_set(2, 3, i);
    expect(support == supports[static_cast<std::size_t>(i - 1)],
           "table vector column");
    FullVec p = basis_vector(2, 3, i);
    double value = 1.0 / std::sqrt(static_cast<double>(support.size()));
    for (std::int64_t j = 1; j <= 8; ++j) {
      bool in = std::find(support.begin(), support.end(), j) != support.end();
      expect(std::abs(p.data[static_cast<std::size_t>(j - 1)] -
                      cplx{in ? value : 0.0}) <= 1e-15,
             "basis vector entries");
    }
    std::set<std::vector<int>> coords;
    for (std::int64_t j : support) {
      // base-2 digits of j-1, most significant first, 1-based axes
      std::vector<int> c(3);
      std::int64_t rest = j - 1;
      for (int pos = 2; pos >= 0; --pos) {
        c[static_cast<std::size_t>(pos)] = static_cast<int>(rest % 2) + 1;
        rest /= 2;
      }
      coords.insert(c);
    }
    expect(coords == tensor_coords[static_cast<std::size_t>(i - 1)],
           "table tensor-coordinate column");
  }

  // displayed basis matrices: exact sparsity pattern, floats within 1e-15
  auto check_matrix = [&](int order, const std::vector<S>& cols, double surd) {
    BasisMatrix P = build_P(2, order);
    expect(P.rows == static_cast<std::int64_t>(cols.size()), "basis row count");
    for (std::size_t i = 0; i < cols.size(); ++i) {
      expect(P.columns[i] == cols[i], "basis sparsity pattern");
      double want = cols[i].size() == 1 ? 1.0 : surd;
      expect(std::abs(P.values[i] - want) <= 1e-15, "basis entry value");
    }
  };
  check_matrix(2, {{1}, {2, 3}, {4}}, 1.0 / std::sqrt(2.0));
  check_matrix(3, {{1}, {2, 3, 5}, {4, 6, 7}, {8}}, 1.0 / std::sqrt(3.0));

  double elapsed = seconds_since(t0);
  expect(elapsed < 1.0, "runtime");
  report(1, "listed desk objects reproduced exactly", ok,
         ok ? "all lists, partitions, table rows, and both displayed basis "
              "matrices match; " +
                  fmt(elapsed) + " s"
            : why);
}

// ------------------------------------------------------------ criterion 2

void criterion_2_oracle_equivalence() {
  auto t0 = clock_type::now();
  SplitMix64 rng(20240201);
  double worst = 0.0;
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 5; ++n)
      for (int trial = 0; trial < 50; ++trial) {
        ComplexMatrix m = random_matrix_unit_norm(d, rng);
        SymVec y = make_sym_vec(d, n);
        for (auto& v : y.data) v = rng.complex_normal();
        SymVec got = SymKronOperator(m, n).apply(y);
        ComplexMatrix s = oracle::symmetric_kron_dense(m, n);
        double num = 0.0, den = 0.0;
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
          cplx acc{0.0};
          for (Eigen::Index j = 0; j < s.cols(); ++j)
            acc += s(i, j) * y.data[static_cast<std::size_t>(j)];
          num += std::norm(got.data[static_cast<std::size_t>(i)] - acc);
          den += std::norm(acc);
        }
        worst = std::max(worst, std::sqrt(num / den));
      }
  double elapsed = seconds_since(t0);
  bool ok = worst <= 1e-12 && elapsed < 60.0;
  report(2, "compressed apply equals the dense oracle", ok,
         "max relative residual " + fmt(worst) + " <= 1e-12 over 500 trials; " +
             fmt(elapsed) + " s < 60 s");
}

// ------------------------------------------------------------ criterion 3

void criterion_3_invariance() {
  SplitMix64 rng(20240301);
  double worst = 0.0;
  int combos[][2] = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {3, 4}};
  for (int trial = 0; trial < 200; ++trial) {
    auto [d, n] = combos[trial % 6];
    ComplexMatrix m = random_complex_matrix(d, rng);
    SymVec labels = make_sym_vec(d, n);
    for (auto& v : labels.data) v = rng.complex_normal();
    FullVec x = labels_to_full(labels);
    FullVec y = oracle::iterated_kron_apply(m, n, x);
    auto scan = detail::scan_symmetry(y, 1e-12);
    double rel = scan.max_norm > 0.0
                     ? scan.max_abs_deviation / scan.max_norm
                     : 0.0;
    worst = std::max(worst, rel);
  }
  bool ok = worst <= 1e-12;
  report(3, "iterated products preserve the symmetric subspace", ok,
         "max in-class deviation " + fmt(worst) + " <= 1e-12 over 200 pairs");
}

// ------------------------------------------------------------ criterion 4

void criterion_4_structure() {
  SplitMix64 rng(20240401);
  double worst_inverse = 0.0, worst_adjoint = 0.0, worst_unitary = 0.0;
  double worst_condition = 0.0;
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 5; ++n)
      for (int trial = 0; trial < 3; ++trial) {
        ComplexMatrix m = random_matrix_conditioned(d, rng);
        StructuralCheck inv = check_inverse(m, n);
        worst_inverse = std::max(worst_inverse, inv.residual);
        worst_condition = std::max(worst_condition, inv.condition);

        ComplexMatrix a = random_matrix_unit_norm(d, rng);
        worst_adjoint = std::max(worst_adjoint, check_adjoint(a, n).residual);

        ComplexMatrix u = random_unitary(d, rng);
        worst_unitary = std::max(worst_unitary, check_unitary(u, n).residual);
      }
  bool ok = worst_inverse <= 1e-10 && worst_adjoint <= 1e-12 &&
            worst_unitary <= 1e-12 && worst_condition < 1e3;
  report(4, "inverse, adjoint, and unitary structure", ok,
         "inverse " + fmt(worst_inverse) + " <= 1e-10 (max condition " +
             fmt(worst_condition) + " < 1e3), adjoint " + fmt(worst_adjoint) +
             " <= 1e-12, unitary " + fmt(worst_unitary) + " <= 1e-12");
}

// ------------------------------------------------------------ criterion 5

void criterion_5_combinatorics() {
  bool ok = true;
  for (int d = 1; d <= 4 && ok; ++d)
    for (int n = 0; n <= 6 && ok; ++n) {
      std::int64_t total = 0;
      auto level = lex_enumerate(d, n);
      for (std::int64_t i = 1; i <= level_size(d, n); ++i) {
        std::int64_t card = sigma_cardinality(d, n, i);
        if (card != multinomial(n, level[static_cast<std::size_t>(i - 1)]))
          ok = false;
        total += card;
      }
      if (total != full_size(d, n)) ok = false;
    }
  report(5, "partition cardinalities are multinomials and sum to d^n", ok,
         "exact integer identities for d <= 4, n <= 6");
}

// ------------------------------------------------------------ criterion 6

void criterion_6_orthonormality() {
  SplitMix64 rng(20240601);
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    hagedorn::ParamPair p = hagedorn::random_valid_pair(d, 1.0, rng);
    hagedorn::OverlapGram g = hagedorn::overlap_gram(p, 3, 40);
    Eigen::MatrixXcd identity =
        Eigen::MatrixXcd::Identity(g.gram.rows(), g.gram.cols());
    worst = std::max(worst, (g.gram - identity).cwiseAbs().maxCoeff());
  }
  bool ok = worst <= 1e-8;
  report(6, "wave packet orthonormality under quadrature", ok,
         "max |gram - identity| " + fmt(worst) +
             " <= 1e-8 (40 nodes per axis, all labels of modulus <= 3)");
}

// ------------------------------------------------------------ criterion 7

void criterion_7_parametrization_change() {
  auto t0 = clock_type::now();
  SplitMix64 rng(20240701);
  double worst = 0.0;
  double verbatim_best = 1e300;  // residual of the uncorrected reading
  std::string signs;
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      hagedorn::ParamPair p = hagedorn::random_valid_pair(2, 1.0, rng);
      ComplexMatrix u = random_unitary(2, rng);
      hagedorn::BundleTransform t = hagedorn::transform_bundle(p, n, u);
      RealMatrix pts(20, 2);
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 2; ++j) pts(i, j) = rng.normal();
      Eigen::MatrixXcd oldv = hagedorn::packet_matrix(p, n, pts);
      Eigen::MatrixXcd newv = hagedorn::packet_matrix(t.new_params, n, pts);
      Eigen::MatrixXcd via = oldv * t.matrix.transpose();
      double plus = (via - newv).cwiseAbs().maxCoeff();
      double minus = (via + newv).cwiseAbs().maxCoeff();
      int sign = plus <= minus ? 1 : -1;
      worst = std::max(worst, std::min(plus, minus));
      signs += (sign > 0) ? '+' : '-';

      ComplexMatrix verb =
          t.phase * SymKronOperator(u, n).materialize();
      Eigen::MatrixXcd via_verb = oldv * verb.transpose();
      double vp = (via_verb - newv).cwiseAbs().maxCoeff();
      double vm = (via_verb + newv).cwiseAbs().maxCoeff();
      verbatim_best = std::min(verbatim_best, std::min(vp, vm));
    }
  double elapsed = seconds_since(t0);
  bool ok = worst <= 1e-10 && elapsed < 30.0;
  report(7, "stacked packets transform by the compressed operator", ok,
         "max pointwise residual " + fmt(worst) +
             " <= 1e-10 up to one global sign per run (signs " + signs +
             "); verbatim non-adjoint reading is off by >= " +
             fmt(verbatim_best) + "; " + fmt(elapsed) + " s < 30 s");
}

// ------------------------------------------------------------ criterion 8

void criterion_8_hermite_factorization() {
  SplitMix64 rng(20240801);
  double worst = 0.0;
  auto hermite_ref = [](int n, double y) {
    double hm1 = 0.0, h = 1.0;
    for (int c = 0; c < n; ++c) {
      double next = 2.0 * y * h - 2.0 * c * hm1;
      hm1 = h;
      h = next;
    }
    return h;
  };
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a_re(2, 2);
    do {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a_re(i, j) = rng.normal();
    } while (std::abs(a_re.determinant()) < 0.3);
    double hbar = rng.uniform(0.5, 1.5);
    ComplexMatrix a = a_re.cast<cplx>();
    ComplexMatrix b = a_re.inverse().transpose().cast<cplx>();
    hagedorn::ParamPair p = hagedorn::validate_params(a, b, hbar);
    RealMatrix pts(50, 2);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 2; ++j) pts(i, j) = rng.normal();
    auto tables = hagedorn::polynomial_tables(p, 4, pts);
    Eigen::MatrixXd q =
        (a_re.inverse() * pts.transpose()).transpose() / std::sqrt(hbar);
    for (int n = 0; n <= 4; ++n) {
      auto level = lex_enumerate(2, n);
      for (std::size_t c = 0; c < level.size(); ++c)
        for (int i = 0; i < 50; ++i) {
          double want = hermite_ref(level[c][0], q(i, 0)) *
                        hermite_ref(level[c][1], q(i, 1));
          cplx got = tables[static_cast<std::size_t>(n)](
              i, static_cast<Eigen::Index>(c));
          worst = std::max(worst, std::abs(got - cplx{want}) /
                                      std::max(1.0, std::abs(want)));
        }
    }
  }
  bool ok = worst <= 1e-10;
  report(8, "real parameters factorize into univariate Hermite products", ok,
         "max deviation " + fmt(worst) +
             " <= 1e-10 over all labels of modulus <= 4 at 50 points");
}

// ------------------------------------------------------------ criterion 9

void criterion_9_realignment() {
  SplitMix64 rng(20240901);
  double worst_im = 0.0, worst_unitary = 0.0;
  bool all_valid = true;
  for (int trial = 0; trial < 100; ++trial) {
    int d = 2 + (trial % 2);
    hagedorn::ParamPair p = hagedorn::random_valid_pair(d, 1.0, rng);
    for (auto mode : {hagedorn::RealignMode::polar, hagedorn::RealignMode::svd}) {
      hagedorn::RealignmentPlan plan = hagedorn::plan_realignment(p, mode);
      worst_im =
          std::max(worst_im, plan.A_new.imag().cwiseAbs().maxCoeff());
      worst_unitary = std::max(
          worst_unitary,
          (plan.U.adjoint() * plan.U - complex_identity(d)).norm());
      all_valid = all_valid &&
                  hagedorn::check_params(plan.A_new, plan.B_new, p.hbar).ok;
    }
  }
  bool ok = worst_im <= 1e-10 && worst_unitary <= 1e-12 && all_valid;
  report(9, "realignment produces a real parameter via a unitary", ok,
         "max imaginary part " + fmt(worst_im) + " <= 1e-10, max unitarity "
         "defect " + fmt(worst_unitary) + " <= 1e-12, transformed pairs " +
             (all_valid ? "all valid" : "NOT all valid") +
             " (100 pairs, both modes)");
}

// ----------------------------------------------------------- criterion 10

void criterion_10_no_blowup(const char* cli_path) {
  auto t0 = clock_type::now();
  SplitMix64 rng(20241001);
  ComplexMatrix m = random_matrix_unit_norm(3, rng);
  SymKronOperator op(m, 10);
  SymVec y = make_sym_vec(3, 10);
  for (auto& v : y.data) v = rng.complex_normal();
  SymVec out = op.apply(y);
  double elapsed = seconds_since(t0);

  std::int64_t ln = level_size(3, 10);   // 66
  std::int64_t dn = full_size(3, 10);    // 59049
  OperatorStorageReport storage = op.storage();
  std::int64_t aux = storage.table_elements + storage.weight_elements +
                     storage.apply_scratch_elements;
  bool storage_ok = aux <= 64 * (ln + 9) && aux < dn;
  bool time_ok = elapsed < 1.0;

  bool refusal_ok = false;
  std::string refusal_detail = "tool path missing";
  if (cli_path != nullptr) {
    std::string cmd = std::string(cli_path) +
                      " check --dim 3 --order 10 --trials 1 --seed 1 "
                      ">/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    refusal_ok = (code == 2);
    refusal_detail = "oracle route exit code " + std::to_string(code);
  }

  bool ok = storage_ok && time_ok && refusal_ok && out.data.size() ==
                                                       static_cast<std::size_t>(ln);
  report(10, "compressed apply never materializes the full space", ok,
         "auxiliary elements " + std::to_string(aux) + " <= " +
             std::to_string(64 * (ln + 9)) + " and < d^n = " +
             std::to_string(dn) + ", apply " + fmt(elapsed) + " s < 1 s, " +
             refusal_detail + " (want 2)");
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli_path = argc > 1 ? argv[1] : nullptr;
  criterion_1_listed_objects();
  criterion_2_oracle_equivalence();
  criterion_3_invariance();
  criterion_4_structure();
  criterion_5_combinatorics();
  criterion_6_orthonormality();
  criterion_7_parametrization_change();
  criterion_8_hermite_factorization();
  criterion_9_realignment();
  criterion_10_no_blowup(cli_path);
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
