// Command-line surface: enumeration, basis export, compressed application,
// randomized verification suites, wave packet operations, and benchmarks.
//
// Exit codes: 0 success, 1 check failure, 2 size cap exceeded,
// 3 unreadable or malformed input, 4 shape mismatch, 5 invalid parameters.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symkron/hagedorn.hpp"
#include "symkron/json_io.hpp"
#include "symkron/kron_oracle.hpp"
#include "symkron/prng.hpp"
#include "symkron/symkron.hpp"

namespace {

using namespace symkron;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitSizeCap = 2;
constexpr int kExitParse = 3;
constexpr int kExitShape = 4;
constexpr int kExitParams = 5;
constexpr int kExitInternal = 70;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::ios_base::failure("cannot write " + out_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
}

// ---------------------------------------------------------------- enumerate

struct EnumerateOptions {
  int dim = 1;
  int order = 0;
  bool redundant = false;
  std::int64_t limit = 4096;
};

int cmd_enumerate(const EnumerateOptions& opt) {
  json out = json::array();
  if (opt.redundant) {
    std::int64_t dn = full_size(opt.dim, opt.order);
    if (dn > opt.limit)
      throw SizeError("redundant listing of length " + std::to_string(dn) +
                      " exceeds --limit " + std::to_string(opt.limit));
    for (std::int64_t j = 1; j <= dn; ++j)
      out.push_back(redundant_entry(opt.dim, opt.order, j));
  } else {
    for (const auto& k : lex_enumerate(opt.dim, opt.order)) out.push_back(k);
  }
  std::cout << out.dump() << '\n';
  return kExitOk;
}

// -------------------------------------------------------------------- basis

struct BasisOptions {
  int dim = 1;
  int order = 0;
  std::string out_path;
};

int cmd_basis(const BasisOptions& opt) {
  BasisMatrix P = build_P(opt.dim, opt.order);
  write_output(opt.out_path, io::encode_basis(P).dump(2));
  return kExitOk;
}

// -------------------------------------------------------------------- apply

struct ApplyOptions {
  std::string matrix_path;
  std::string vector_path;
  int order = 1;
  std::string out_path;
  bool check = false;
};

int cmd_apply(const ApplyOptions& opt) {
  ComplexMatrix m = io::decode_matrix(load_json(opt.matrix_path));
  if (m.rows() != m.cols()) throw ShapeError("apply: matrix must be square");
  SymVec y = io::decode_sym_vec(load_json(opt.vector_path));
  if (y.dim != static_cast<int>(m.rows()) || y.order != opt.order)
    throw ShapeError("apply: vector does not match --order and the matrix size");
  SymKronOperator op(m, opt.order);
  SymVec result = op.apply(y);
  json out = io::encode_sym_vec(result);
  if (opt.check) {
    ComplexMatrix s = oracle::symmetric_kron_dense(m, opt.order);
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      cplx acc{0.0};
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        acc += s(i, j) * y.data[static_cast<std::size_t>(j)];
      num += std::norm(result.data[static_cast<std::size_t>(i)] - acc);
      den += std::norm(acc);
    }
    out["oracle_residual"] =
        std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
  }
  write_output(opt.out_path, out.dump(2));
  return kExitOk;
}

// -------------------------------------------------------------------- check

struct CheckOptions {
  int dim = 2;
  int order = 2;
  int trials = 20;
  std::uint64_t seed = 12345;
  bool inject_nonunitary = false;  // negative-test hook
};

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  json worst_case;

  bool pass() const { return max_residual <= tolerance; }
};

void print_suite(const SuiteResult& r) {
  std::cout << "suite: " << r.name << " max_residual: "
            << io::format_double(r.max_residual)
            << " tolerance: " << io::format_double(r.tolerance)
            << " status: " << (r.pass() ? "PASS" : "FAIL") << '\n';
}

int cmd_check(const CheckOptions& opt) {
  // the equivalence suites need the dense oracle
  if (full_size(opt.dim, opt.order) > oracle::kExplicitBuildCap)
    throw SizeError("check: d^n = " +
                    std::to_string(full_size(opt.dim, opt.order)) +
                    " exceeds the dense-oracle cap " +
                    std::to_string(oracle::kExplicitBuildCap));
  std::vector<SuiteResult> suites;

  {
    SuiteResult r{"oracle-equivalence", 0.0, 1e-12, {}};
    SplitMix64 rng(opt.seed);
    for (int t = 0; t < opt.trials; ++t) {
      ComplexMatrix m = random_matrix_unit_norm(opt.dim, rng);
      SymVec y = make_sym_vec(opt.dim, opt.order);
      for (auto& v : y.data) v = rng.complex_normal();
      SymVec got = SymKronOperator(m, opt.order).apply(y);
      ComplexMatrix s = oracle::symmetric_kron_dense(m, opt.order);
      double num = 0.0, den = 0.0;
      for (Eigen::Index i = 0; i < s.rows(); ++i) {
        cplx acc{0.0};
        for (Eigen::Index j = 0; j < s.cols(); ++j)
          acc += s(i, j) * y.data[static_cast<std::size_t>(j)];
        num += std::norm(got.data[static_cast<std::size_t>(i)] - acc);
        den += std::norm(acc);
      }
      double res = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
      if (res > r.max_residual) {
        r.max_residual = res;
        r.worst_case = {{"trial", t},
                        {"matrix", io::encode_matrix(m)},
                        {"vector", io::encode_sym_vec(y)}};
      }
    }
    suites.push_back(std::move(r));
  }

  {
    SuiteResult r{"adjoint", 0.0, 1e-12, {}};
    SplitMix64 rng(opt.seed + 1);
    for (int t = 0; t < opt.trials; ++t) {
      ComplexMatrix m = random_matrix_unit_norm(opt.dim, rng);
      double res = check_adjoint(m, opt.order).residual;
      if (res > r.max_residual) {
        r.max_residual = res;
        r.worst_case = {{"trial", t}, {"matrix", io::encode_matrix(m)}};
      }
    }
    suites.push_back(std::move(r));
  }

  {
    SuiteResult r{"inverse", 0.0, 1e-10, {}};
    SplitMix64 rng(opt.seed + 2);
    for (int t = 0; t < opt.trials; ++t) {
      ComplexMatrix m = random_matrix_conditioned(opt.dim, rng);
      double res = check_inverse(m, opt.order).residual;
      if (res > r.max_residual) {
        r.max_residual = res;
        r.worst_case = {{"trial", t}, {"matrix", io::encode_matrix(m)}};
      }
    }
    suites.push_back(std::move(r));
  }

  {
    SuiteResult r{"unitary", 0.0, 1e-12, {}};
    SplitMix64 rng(opt.seed + 3);
    for (int t = 0; t < opt.trials; ++t) {
      ComplexMatrix u = random_unitary(opt.dim, rng);
      if (opt.inject_nonunitary && t == 0) u(0, 0) += cplx{0.5};
      double res = check_unitary(u, opt.order).residual;
      if (res > r.max_residual) {
        r.max_residual = res;
        r.worst_case = {{"trial", t}, {"matrix", io::encode_matrix(u)}};
      }
    }
    suites.push_back(std::move(r));
  }

  {
    SuiteResult r{"partition", 0.0, 0.0, {}};
    std::int64_t total = 0;
    auto level = lex_enumerate(opt.dim, opt.order);
    for (std::int64_t i = 1; i <= level_size(opt.dim, opt.order); ++i) {
      std::int64_t card = sigma_cardinality(opt.dim, opt.order, i);
      if (card != multinomial(opt.order, level[static_cast<std::size_t>(i - 1)]))
        r.max_residual = 1.0;
      total += card;
    }
    if (total != full_size(opt.dim, opt.order)) r.max_residual = 1.0;
    suites.push_back(std::move(r));
  }

  {
    SuiteResult r{"orthonormality", 0.0, 1e-14, {}};
    RealMatrix dense = basis_dense(build_P(opt.dim, opt.order));
    RealMatrix gram = dense * dense.transpose();
    r.max_residual =
        (gram - RealMatrix::Identity(gram.rows(), gram.cols()))
            .cwiseAbs()
            .maxCoeff();
    suites.push_back(std::move(r));
  }

  bool all_pass = true;
  for (const auto& r : suites) {
    print_suite(r);
    all_pass = all_pass && r.pass();
  }
  if (!all_pass) {
    for (const auto& r : suites)
      if (!r.pass() && !r.worst_case.is_null())
        std::cout << "failing case (" << r.name
                  << "): " << r.worst_case.dump() << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

// --------------------------------------------------------------- wavepacket

struct WavepacketOptions {
  std::string params_path;
  std::string points_path;
  std::string unitary_path;
  int order = 0;
  std::string mode = "polar";
  std::vector<double> times;
  std::string format = "json";
  std::string out_path;
  double tol = 1e-10;
};

hagedorn::ParamPair load_params(const std::string& path, double tol) {
  hagedorn::ParamPair raw = io::decode_params(load_json(path));
  return hagedorn::validate_params(raw.A, raw.B, raw.hbar, tol);
}

int cmd_wavepacket_eval(const WavepacketOptions& opt) {
  hagedorn::ParamPair p = load_params(opt.params_path, opt.tol);
  std::ifstream in(opt.points_path);
  if (!in) throw std::ios_base::failure("cannot open " + opt.points_path);
  RealMatrix pts = io::read_points_csv(in, p.dim);
  Eigen::MatrixXcd values = hagedorn::packet_matrix(p, opt.order, pts);
  auto level = lex_enumerate(p.dim, opt.order);
  if (opt.format == "csv") {
    std::ostringstream out;
    for (std::size_t c = 0; c < level.size(); ++c)
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        for (int j = 0; j < p.dim; ++j)
          out << level[c][static_cast<std::size_t>(j)] << ',';
        for (int j = 0; j < p.dim; ++j)
          out << io::format_double(pts(i, j)) << ',';
        cplx v = values(i, static_cast<Eigen::Index>(c));
        out << io::format_double(v.real()) << ','
            << io::format_double(v.imag()) << '\n';
      }
    write_output(opt.out_path, out.str());
  } else {
    json out;
    out["dim"] = p.dim;
    out["order"] = opt.order;
    json labels = json::array();
    for (const auto& k : level) labels.push_back(k);
    out["labels"] = std::move(labels);
    json vals = json::array();
    for (std::size_t c = 0; c < level.size(); ++c) {
      json per_packet = json::array();
      for (Eigen::Index i = 0; i < pts.rows(); ++i)
        per_packet.push_back(
            io::encode_complex(values(i, static_cast<Eigen::Index>(c))));
      vals.push_back(std::move(per_packet));
    }
    out["values"] = std::move(vals);
    write_output(opt.out_path, out.dump(2));
  }
  return kExitOk;
}

int cmd_wavepacket_transform(const WavepacketOptions& opt) {
  hagedorn::ParamPair p = load_params(opt.params_path, opt.tol);
  ComplexMatrix u = io::decode_matrix(load_json(opt.unitary_path));
  hagedorn::BundleTransform t = hagedorn::transform_bundle(p, opt.order, u);
  write_output(opt.out_path, io::encode_transform(t).dump(2));
  return kExitOk;
}

int cmd_wavepacket_realign(const WavepacketOptions& opt) {
  hagedorn::ParamPair p = load_params(opt.params_path, opt.tol);
  hagedorn::RealignMode mode = (opt.mode == "svd")
                                   ? hagedorn::RealignMode::svd
                                   : hagedorn::RealignMode::polar;
  hagedorn::RealignmentPlan plan = hagedorn::plan_realignment(p, mode);
  write_output(opt.out_path, io::encode_realignment(plan).dump(2));
  return kExitOk;
}

int cmd_wavepacket_flow(const WavepacketOptions& opt) {
  hagedorn::ParamPair p = load_params(opt.params_path, opt.tol);
  json out = json::array();
  for (double t : opt.times) {
    auto [at, bt] = hagedorn::harmonic_flow(p.A, p.B, t);
    out.push_back({{"t", t},
                   {"A", io::encode_matrix(at)},
                   {"B", io::encode_matrix(bt)}});
  }
  write_output(opt.out_path, out.dump(2));
  return kExitOk;
}

// -------------------------------------------------------------------- bench

struct BenchOptions {
  int dim = 3;
  std::string order_range = "2:6";
  int reps = 3;
  std::uint64_t seed = 12345;
  std::string out_path;
};

int cmd_bench(const BenchOptions& opt) {
  int lo = 0, hi = 0;
  {
    auto colon = opt.order_range.find(':');
    if (colon == std::string::npos)
      throw ShapeError("--order-range must be LO:HI");
    lo = std::stoi(opt.order_range.substr(0, colon));
    hi = std::stoi(opt.order_range.substr(colon + 1));
    if (lo < 0 || hi < lo) throw ShapeError("--order-range must be LO:HI");
  }
  SplitMix64 rng(opt.seed);
  std::ostringstream out;
  out << "dim,order,rep,compressed_seconds,oracle_seconds,aux_elements\n";
  using clock = std::chrono::steady_clock;
  for (int n = lo; n <= hi; ++n) {
    ComplexMatrix m = random_matrix_unit_norm(opt.dim, rng);
    SymKronOperator op(m, n);
    OperatorStorageReport storage = op.storage();
    std::int64_t aux = storage.table_elements + storage.weight_elements +
                       storage.apply_scratch_elements;
    bool oracle_allowed =
        full_size(opt.dim, n) <= oracle::kExplicitBuildCap;
    for (int rep = 0; rep < opt.reps; ++rep) {
      SymVec y = make_sym_vec(opt.dim, n);
      for (auto& v : y.data) v = rng.complex_normal();
      auto t0 = clock::now();
      SymVec fast = op.apply(y);
      auto t1 = clock::now();
      double fast_seconds =
          std::chrono::duration<double>(t1 - t0).count();
      out << opt.dim << ',' << n << ',' << rep << ','
          << io::format_double(fast_seconds) << ',';
      if (oracle_allowed) {
        auto t2 = clock::now();
        ComplexMatrix s = oracle::symmetric_kron_dense(m, n);
        ComplexVector prod(s.rows());
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
          cplx acc{0.0};
          for (Eigen::Index j = 0; j < s.cols(); ++j)
            acc += s(i, j) * y.data[static_cast<std::size_t>(j)];
          prod(i) = acc;
        }
        auto t3 = clock::now();
        out << io::format_double(
            std::chrono::duration<double>(t3 - t2).count());
        (void)fast;
      } else {
        out << "capped";
      }
      out << ',' << aux << '\n';
    }
  }
  write_output(opt.out_path, out.str());
  return kExitOk;
}

// A config file may supply any long option of the chosen subcommand as a
// JSON object; command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (std::next(it) == args.end())
    throw std::ios_base::failure("--config needs a file path");
  json cfg = load_json(*std::next(it));
  std::vector<std::string> extra;
  for (auto& [key, value] : cfg.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back("--" + key);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back("--" + key);
        extra.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else {
      extra.push_back("--" + key);
      extra.push_back(value.is_string() ? value.get<std::string>()
                                        : value.dump());
    }
  }
  args.erase(it, std::next(it, 2));
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-free symmetric Kronecker products and semiclassical "
               "wave packet parametrization changes"};
  app.name("symkron");
  app.require_subcommand(1);
  app.allow_extras(false);

  EnumerateOptions enum_opt;
  auto* enum_cmd = app.add_subcommand(
      "enumerate", "list multi-indices of one order in canonical order");
  enum_cmd->add_option("--dim", enum_opt.dim, "dimension d")->required();
  enum_cmd->add_option("--order", enum_opt.order, "order n")->required();
  enum_cmd->add_flag("--redundant", enum_opt.redundant,
                     "list the length-d^n redundant enumeration instead");
  enum_cmd->add_option("--limit", enum_opt.limit,
                       "redundant listing cap (default 4096)");

  BasisOptions basis_opt;
  auto* basis_cmd = app.add_subcommand(
      "basis", "export the sparse symmetric-subspace basis as triplet JSON");
  basis_cmd->add_option("--dim", basis_opt.dim)->required();
  basis_cmd->add_option("--order", basis_opt.order)->required();
  basis_cmd->add_option("--out", basis_opt.out_path, "output file");

  ApplyOptions apply_opt;
  auto* apply_cmd = app.add_subcommand(
      "apply", "apply the compressed operator of a matrix to a vector");
  apply_cmd->add_option("--matrix", apply_opt.matrix_path)->required();
  apply_cmd->add_option("--order", apply_opt.order)->required();
  apply_cmd->add_option("--vector", apply_opt.vector_path)->required();
  apply_cmd->add_option("--out", apply_opt.out_path);
  apply_cmd->add_flag("--check", apply_opt.check,
                      "cross-check against the dense oracle (capped)");

  CheckOptions check_opt;
  auto* check_cmd = app.add_subcommand(
      "check", "run the randomized verification suites");
  check_cmd->add_option("--dim", check_opt.dim)->required();
  check_cmd->add_option("--order", check_opt.order)->required();
  check_cmd->add_option("--trials", check_opt.trials);
  check_cmd->add_option("--seed", check_opt.seed);
  check_cmd->add_flag("--inject-nonunitary", check_opt.inject_nonunitary,
                      "corrupt one unitary draw (self-test of the suite)");

  WavepacketOptions wp_opt;
  auto* wp_cmd = app.add_subcommand("wavepacket",
                                    "semiclassical wave packet operations");
  wp_cmd->require_subcommand(1);
  auto* wp_eval = wp_cmd->add_subcommand("eval",
                                         "evaluate one order of packets on a "
                                         "point grid");
  wp_eval->add_option("--params", wp_opt.params_path)->required();
  wp_eval->add_option("--points", wp_opt.points_path)->required();
  wp_eval->add_option("--order", wp_opt.order)->required();
  wp_eval->add_option("--format", wp_opt.format)
      ->check(CLI::IsMember({"json", "csv"}));
  wp_eval->add_option("--out", wp_opt.out_path);

  auto* wp_transform = wp_cmd->add_subcommand(
      "transform", "parametrization-change matrix for a unitary");
  wp_transform->add_option("--params", wp_opt.params_path)->required();
  wp_transform->add_option("--unitary", wp_opt.unitary_path)->required();
  wp_transform->add_option("--order", wp_opt.order)->required();
  wp_transform->add_option("--out", wp_opt.out_path);

  auto* wp_realign = wp_cmd->add_subcommand(
      "realign", "unitary that makes the first parameter matrix real");
  wp_realign->add_option("--params", wp_opt.params_path)->required();
  wp_realign->add_option("--mode", wp_opt.mode)
      ->check(CLI::IsMember({"polar", "svd"}));
  wp_realign->add_option("--out", wp_opt.out_path);

  auto* wp_flow = wp_cmd->add_subcommand(
      "flow", "harmonic oscillator parameter flow at given times");
  wp_flow->add_option("--params", wp_opt.params_path)->required();
  wp_flow->add_option("--t", wp_opt.times, "time (repeatable)")->required();
  wp_flow->add_option("--out", wp_opt.out_path);

  BenchOptions bench_opt;
  auto* bench_cmd = app.add_subcommand(
      "bench", "time the compressed path against the dense oracle");
  bench_cmd->add_option("--dim", bench_opt.dim)->required();
  bench_cmd->add_option("--order-range", bench_opt.order_range, "LO:HI")
      ->required();
  bench_cmd->add_option("--reps", bench_opt.reps);
  bench_cmd->add_option("--seed", bench_opt.seed);
  bench_cmd->add_option("--out", bench_opt.out_path);

  try {
    auto args = expand_config(argc, argv);
    // CLI11 parses reversed vectors
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (enum_cmd->parsed()) return cmd_enumerate(enum_opt);
    if (basis_cmd->parsed()) return cmd_basis(basis_opt);
    if (apply_cmd->parsed()) return cmd_apply(apply_opt);
    if (check_cmd->parsed()) return cmd_check(check_opt);
    if (wp_cmd->parsed()) {
      if (wp_eval->parsed()) return cmd_wavepacket_eval(wp_opt);
      if (wp_transform->parsed()) return cmd_wavepacket_transform(wp_opt);
      if (wp_realign->parsed()) return cmd_wavepacket_realign(wp_opt);
      if (wp_flow->parsed()) return cmd_wavepacket_flow(wp_opt);
    }
    if (bench_cmd->parsed()) return cmd_bench(bench_opt);
  } catch (const SizeError& e) {
    std::cerr << "size cap: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const SymmetryError& e) {
    std::cerr << "shape: " << e.what() << '\n';
    return kExitShape;
  } catch (const ShapeError& e) {
    std::cerr << "shape: " << e.what() << '\n';
    return kExitShape;
  } catch (const ParamError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitParams;
  } catch (const SingularMatrixError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitParams;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "parse: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
