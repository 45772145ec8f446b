#pragma once

// Semiclassical wave packets parametrized by two invertible complex
// matrices (A, B) subject to
//
//   (i)  A^t B - B^t A = 0,
//   (ii) A^* B + B^* A = 2 Id,
//
// which make Re(B A^{-1}) = (A A^*)^{-1} Hermitian positive definite.
// The ground state is a normalized complex Gaussian; higher packets are
// polynomials times that Gaussian, generated by a three-term recurrence.
// A unitary right-multiplication (A, B) -> (AU, BU) changes the stacked
// order-n packet values by a phase times a compressed Kronecker operator;
// realignment picks the unitary that makes A real.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "symkron/errors.hpp"
#include "symkron/matrix.hpp"
#include "symkron/multiindex.hpp"
#include "symkron/prng.hpp"
#include "symkron/symkron.hpp"

namespace symkron::hagedorn {

struct ParamPair {
  int dim = 0;
  double hbar = 1.0;
  ComplexMatrix A;
  ComplexMatrix B;
};

struct ValidationReport {
  bool ok = false;
  double symmetry_residual = 0.0;       // ||A^t B - B^t A||_F
  double normalization_residual = 0.0;  // ||A^* B + B^* A - 2 Id||_F
  double condition_A = 0.0;
  double condition_B = 0.0;
  bool width_positive_definite = false;  // Re(B A^{-1}) admits a Cholesky

  std::string describe() const {
    std::string s;
    s += "symmetry residual " + std::to_string(symmetry_residual);
    s += ", normalization residual " + std::to_string(normalization_residual);
    s += ", cond(A) " + std::to_string(condition_A);
    s += ", cond(B) " + std::to_string(condition_B);
    s += width_positive_definite ? ", width positive definite"
                                 : ", width NOT positive definite";
    return s;
  }
};

inline ValidationReport check_params(const ComplexMatrix& A,
                                     const ComplexMatrix& B, double hbar,
                                     double tol = 1e-10) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw ShapeError("check_params: A and B must be square of equal size");
  if (!(hbar > 0.0)) throw ParamError("check_params: hbar must be positive");
  int d = static_cast<int>(A.rows());
  ValidationReport r;
  r.symmetry_residual =
      (A.transpose() * B - B.transpose() * A).norm();
  r.normalization_residual =
      (A.adjoint() * B + B.adjoint() * A - 2.0 * complex_identity(d)).norm();
  r.condition_A = condition_number(A);
  r.condition_B = condition_number(B);
  bool invertible = std::isfinite(r.condition_A) && r.condition_A < 1e12 &&
                    std::isfinite(r.condition_B) && r.condition_B < 1e12;
  if (invertible) {
    ComplexMatrix width = B * Eigen::MatrixXcd(A).inverse();
    Eigen::MatrixXd re_width = width.real();
    re_width = 0.5 * (re_width + re_width.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(re_width);
    r.width_positive_definite = (llt.info() == Eigen::Success);
  }
  r.ok = invertible && r.width_positive_definite &&
         r.symmetry_residual <= tol && r.normalization_residual <= tol;
  return r;
}

inline ParamPair validate_params(const ComplexMatrix& A, const ComplexMatrix& B,
                                 double hbar, double tol = 1e-10) {
  ValidationReport r = check_params(A, B, hbar, tol);
  if (!r.ok)
    throw ParamError("parameter matrices fail the compatibility conditions: " +
                     r.describe());
  return ParamPair{static_cast<int>(A.rows()), hbar, A, B};
}

// principal branch of z^{-1/2}
inline cplx inv_sqrt(cplx z) { return 1.0 / std::sqrt(z); }

// Ground state values at real points (one point per row).
inline ComplexVector gaussian_eval(const ParamPair& p,
                                   const RealMatrix& points) {
  if (points.cols() != p.dim)
    throw ShapeError("gaussian_eval: points have wrong dimension");
  int d = p.dim;
  ComplexMatrix width = p.B * Eigen::MatrixXcd(p.A).inverse();
  cplx det_a = Eigen::MatrixXcd(p.A).determinant();
  cplx prefactor =
      std::pow(std::numbers::pi * p.hbar, -0.25 * d) * inv_sqrt(det_a);
  ComplexVector out(points.rows());
  for (Eigen::Index pt = 0; pt < points.rows(); ++pt) {
    cplx quad{0.0};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        quad += points(pt, i) * width(i, j) * points(pt, j);
    out(pt) = prefactor * std::exp(-quad / (2.0 * p.hbar));
  }
  return out;
}

namespace detail {

// q = A^{-1} x per point (rows) and the recurrence matrix A^{-1} conj(A)
struct RecurrenceGeometry {
  ComplexMatrix q;       // npts x d
  ComplexMatrix g;       // d x d
  double two_over_sqrt_hbar = 0.0;

  RecurrenceGeometry(const ParamPair& p, const RealMatrix& points) {
    Eigen::MatrixXcd a_inv = Eigen::MatrixXcd(p.A).inverse();
    q = (a_inv * points.transpose().cast<cplx>()).transpose();
    g = a_inv * p.A.conjugate();
    two_over_sqrt_hbar = 2.0 / std::sqrt(p.hbar);
  }
};

}  // namespace detail

// One recurrence step: from all polynomial values of two consecutive levels
// to the next level.  Every child reachable from several parents is
// computed along all of them; the routes must agree within tol relative
// to the value magnitude.
inline Eigen::MatrixXcd polynomial_recurrence_step(
    const ParamPair& p, int level, const RealMatrix& points,
    const Eigen::MatrixXcd& values_n, const Eigen::MatrixXcd& values_nm1,
    double consistency_tol = 1e-10) {
  int d = p.dim;
  if (values_n.cols() != level_size(d, level))
    throw ShapeError("polynomial_recurrence_step: level table has wrong width");
  if (level > 0 && values_nm1.cols() != level_size(d, level - 1))
    throw ShapeError("polynomial_recurrence_step: lower table has wrong width");
  if (values_n.rows() != points.rows() ||
      (level > 0 && values_nm1.rows() != points.rows()))
    throw ShapeError("polynomial_recurrence_step: tables and points disagree "
                     "on the batch size");
  detail::RecurrenceGeometry geo(p, points);
  auto children = lex_enumerate(d, level + 1);
  Eigen::MatrixXcd out(points.rows(), static_cast<Eigen::Index>(children.size()));
  for (std::size_t ci = 0; ci < children.size(); ++ci) {
    const MultiIndex& c = children[ci];
    bool have_canonical = false;
    Eigen::VectorXcd canonical;
    for (int j = 0; j < d; ++j) {
      if (c[static_cast<std::size_t>(j)] == 0) continue;
      MultiIndex k = c;
      k[static_cast<std::size_t>(j)] -= 1;
      Eigen::Index rk = lex_rank(d, level, k) - 1;
      Eigen::VectorXcd value =
          geo.two_over_sqrt_hbar *
          geo.q.col(j).cwiseProduct(values_n.col(rk));
      for (int t = 0; t < d; ++t) {
        int kt = k[static_cast<std::size_t>(t)];
        if (kt == 0) continue;
        MultiIndex down = k;
        down[static_cast<std::size_t>(t)] -= 1;
        Eigen::Index rd = lex_rank(d, level - 1, down) - 1;
        value -= 2.0 * geo.g(j, t) * static_cast<double>(kt) *
                 values_nm1.col(rd);
      }
      if (!have_canonical) {
        canonical = value;
        have_canonical = true;
      } else {
        for (Eigen::Index pt = 0; pt < value.size(); ++pt) {
          double scale = std::max(1.0, std::abs(canonical(pt)));
          if (std::abs(value(pt) - canonical(pt)) > consistency_tol * scale)
            throw ConsistencyError(
                "polynomial_recurrence_step: parent routes disagree by " +
                std::to_string(std::abs(value(pt) - canonical(pt))));
        }
      }
    }
    out.col(static_cast<Eigen::Index>(ci)) = canonical;
  }
  return out;
}

// Polynomial values for all levels 0..max_order at a batch of points,
// following the first-parent route of the recurrence.
inline std::vector<Eigen::MatrixXcd> polynomial_tables(
    const ParamPair& p, int max_order, const RealMatrix& points) {
  int d = p.dim;
  detail::RecurrenceGeometry geo(p, points);
  std::vector<Eigen::MatrixXcd> tables;
  tables.reserve(static_cast<std::size_t>(max_order) + 1);
  tables.emplace_back(Eigen::MatrixXcd::Ones(points.rows(), 1));
  for (int level = 0; level < max_order; ++level) {
    auto children = lex_enumerate(d, level + 1);
    Eigen::MatrixXcd next(points.rows(),
                          static_cast<Eigen::Index>(children.size()));
    for (std::size_t ci = 0; ci < children.size(); ++ci) {
      const MultiIndex& c = children[ci];
      int j = 0;
      while (c[static_cast<std::size_t>(j)] == 0) ++j;
      MultiIndex k = c;
      k[static_cast<std::size_t>(j)] -= 1;
      Eigen::Index rk = lex_rank(d, level, k) - 1;
      Eigen::VectorXcd value = geo.two_over_sqrt_hbar *
                               geo.q.col(j).cwiseProduct(tables.back().col(rk));
      for (int t = 0; t < d; ++t) {
        int kt = k[static_cast<std::size_t>(t)];
        if (kt == 0) continue;
        MultiIndex down = k;
        down[static_cast<std::size_t>(t)] -= 1;
        Eigen::Index rd = lex_rank(d, level - 1, down) - 1;
        value -= 2.0 * geo.g(j, t) * static_cast<double>(kt) *
                 tables[static_cast<std::size_t>(level - 1)].col(rd);
      }
      next.col(static_cast<Eigen::Index>(ci)) = value;
    }
    tables.push_back(std::move(next));
  }
  return tables;
}

// 1/sqrt(2^|k| k!) per canonical entry of the level.
inline std::vector<double> packet_normalizers(int dim, int order) {
  auto level = lex_enumerate(dim, order);
  std::vector<double> out(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) {
    double f = 1.0;
    for (int e : level[i])
      for (int t = 1; t <= e; ++t) f *= 2.0 * t;  // 2^|k| k! as one product
    out[i] = 1.0 / std::sqrt(f);
  }
  return out;
}

// Stacked packet values of one order: row = point, column = canonical label.
inline Eigen::MatrixXcd packet_matrix(const ParamPair& p, int order,
                                      const RealMatrix& points) {
  auto tables = polynomial_tables(p, order, points);
  ComplexVector ground = gaussian_eval(p, points);
  auto norms = packet_normalizers(p.dim, order);
  Eigen::MatrixXcd out = tables[static_cast<std::size_t>(order)];
  for (Eigen::Index c = 0; c < out.cols(); ++c)
    out.col(c) = norms[static_cast<std::size_t>(c)] *
                 out.col(c).cwiseProduct(ground);
  return out;
}

// One packet, arbitrary label.
inline ComplexVector wavepacket_eval(const ParamPair& p, const MultiIndex& k,
                                     const RealMatrix& points) {
  if (static_cast<int>(k.size()) != p.dim)
    throw ShapeError("wavepacket_eval: label has wrong dimension");
  int order = static_cast<int>(modulus(k));
  Eigen::MatrixXcd all = packet_matrix(p, order, points);
  return all.col(lex_rank(p.dim, order, k) - 1);
}

// All packets of one order of a parametrization: the unit that stacked
// evaluation and the parametrization-change operator act on.
struct WavePacketBundle {
  ParamPair params;
  int order = 0;
};

inline Eigen::MatrixXcd packet_matrix(const WavePacketBundle& b,
                                      const RealMatrix& points) {
  return packet_matrix(b.params, b.order, points);
}

// Harmonic oscillator parameter flow.
inline std::pair<ComplexMatrix, ComplexMatrix> harmonic_flow(
    const ComplexMatrix& a0, const ComplexMatrix& b0, double t) {
  const cplx i_unit{0.0, 1.0};
  ComplexMatrix a = std::cos(t) * a0 + i_unit * std::sin(t) * b0;
  ComplexMatrix b = i_unit * std::sin(t) * a0 + std::cos(t) * b0;
  return {a, b};
}

namespace detail {

// Eigendecomposition of the real symmetric part of A A^*, eigenvalues
// descending, column signs fixed so the largest-magnitude entry of each
// eigenvector is positive.
struct WidthFactor {
  Eigen::MatrixXd v;
  Eigen::VectorXd sigma;  // positive square roots, descending

  explicit WidthFactor(const ComplexMatrix& a) {
    Eigen::MatrixXd s = (a * a.adjoint()).real();
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
      throw SingularMatrixError("width factorization failed");
    int d = static_cast<int>(a.rows());
    v.resize(d, d);
    sigma.resize(d);
    for (int c = 0; c < d; ++c) {
      // reverse into descending order
      double lambda = es.eigenvalues()(d - 1 - c);
      if (lambda <= 0.0)
        throw SingularMatrixError("width factorization: nonpositive spectrum");
      sigma(c) = std::sqrt(lambda);
      v.col(c) = es.eigenvectors().col(d - 1 - c);
      Eigen::Index imax = 0;
      v.col(c).cwiseAbs().maxCoeff(&imax);
      if (v(imax, c) < 0.0) v.col(c) = -v.col(c);
    }
  }
};

}  // namespace detail

enum class RealignMode { polar, svd };

struct RealignmentPlan {
  RealignMode mode = RealignMode::polar;
  ComplexMatrix U;      // unitary right factor
  ComplexMatrix A_new;  // A * U, real up to rounding
  ComplexMatrix B_new;  // B * U
  cplx phase;           // det(U)^{-1/2}, principal branch
};

// Choose the unitary that carries the parametrization to a real A.
// polar: A_new is the symmetric positive square root of A A^*;
// svd:   A_new keeps only the left factor times the singular values.
inline RealignmentPlan plan_realignment(const ParamPair& p, RealignMode mode) {
  detail::WidthFactor wf(p.A);
  Eigen::MatrixXcd v = wf.v.cast<cplx>();
  Eigen::VectorXcd sigma_inv = wf.sigma.cast<cplx>().cwiseInverse();
  Eigen::MatrixXcd w = p.A.adjoint() * v * sigma_inv.asDiagonal();
  RealignmentPlan plan;
  plan.mode = mode;
  if (mode == RealignMode::polar)
    plan.U = ComplexMatrix(w * v.transpose());
  else
    plan.U = ComplexMatrix(w);
  plan.A_new = p.A * plan.U;
  plan.B_new = p.B * plan.U;
  plan.phase = inv_sqrt(Eigen::MatrixXcd(plan.U).determinant());
  return plan;
}

struct BundleTransform {
  int dim = 0;
  int order = 0;
  ComplexMatrix U;
  cplx phase;            // det(U)^{-1/2}, principal branch
  ComplexMatrix matrix;  // phase * compressed operator of U^*
  ParamPair new_params;  // (A U, B U)
};

// The linear map carrying stacked order-n packet values of (A, B) to those
// of (A U, B U).  The compressed operator is built from the adjoint of U:
// the raising operators transform by U^*, so a row-vector formula applied
// verbatim to U would act on the wrong side.  Up to the branch of the
// square root the map is exact; a global sign may remain.
inline BundleTransform transform_bundle(const ParamPair& p, int order,
                                        const ComplexMatrix& u,
                                        double unitary_tol = 1e-12) {
  if (u.rows() != p.dim || u.cols() != p.dim)
    throw ShapeError("transform_bundle: unitary has wrong dimension");
  double unitary_residual =
      (u.adjoint() * u - complex_identity(p.dim)).norm();
  if (unitary_residual > unitary_tol)
    throw ParamError("transform_bundle: matrix is not unitary (residual " +
                     std::to_string(unitary_residual) + ")");
  BundleTransform t;
  t.dim = p.dim;
  t.order = order;
  t.U = u;
  t.phase = inv_sqrt(Eigen::MatrixXcd(u).determinant());
  t.matrix = SymKronOperator(ComplexMatrix(u.adjoint()), order).materialize();
  t.matrix *= t.phase;
  t.new_params = ParamPair{p.dim, p.hbar, ComplexMatrix(p.A * u),
                           ComplexMatrix(p.B * u)};
  return t;
}

inline BundleTransform transform_bundle(const WavePacketBundle& b,
                                        const ComplexMatrix& u,
                                        double unitary_tol = 1e-12) {
  return transform_bundle(b.params, b.order, u, unitary_tol);
}

// Gauss-Hermite rule for weight exp(-x^2): Golub-Welsch on the Jacobi matrix.
struct GaussHermiteRule {
  RealVector nodes;
  RealVector weights;
};

inline GaussHermiteRule gauss_hermite(int count) {
  if (count < 1) throw ShapeError("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int i = 1; i < count; ++i) {
    double off = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = off;
    jacobi(i - 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(count);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < count; ++i) {
    double first = es.eigenvectors()(0, i);
    rule.weights(i) = mu0 * first * first;
  }
  return rule;
}

// Gram matrix of all packets with |k| <= max_order under tensorized
// Gauss-Hermite quadrature adapted to the Gaussian width and hbar.
// Entries are indexed by (level, canonical rank), levels ascending.
struct OverlapGram {
  std::vector<std::pair<int, MultiIndex>> labels;
  Eigen::MatrixXcd gram;
};

inline OverlapGram overlap_gram(const ParamPair& p, int max_order,
                                int nodes_per_axis = 40) {
  int d = p.dim;
  GaussHermiteRule rule = gauss_hermite(nodes_per_axis);
  std::int64_t npts = 1;
  for (int a = 0; a < d; ++a)
    npts = symkron::detail::checked_mul(npts, nodes_per_axis, "overlap grid");
  if (npts > (std::int64_t{1} << 22))
    throw SizeError("overlap_gram: quadrature grid too large");

  detail::WidthFactor wf(p.A);
  Eigen::MatrixXd half_width =
      wf.v * wf.sigma.asDiagonal() * wf.v.transpose();  // (A A^*)^{1/2}
  double sqrt_hbar = std::sqrt(p.hbar);

  RealMatrix points(npts, d);
  RealVector total_weight(npts);
  std::vector<int> grid(static_cast<std::size_t>(d), 0);
  for (std::int64_t g = 0; g < npts; ++g) {
    Eigen::VectorXd u(d);
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      u(a) = rule.nodes(grid[static_cast<std::size_t>(a)]);
      w *= rule.weights(grid[static_cast<std::size_t>(a)]);
    }
    points.row(g) = (sqrt_hbar * (half_width * u)).transpose();
    total_weight(g) = w;
    for (int a = d - 1; a >= 0; --a) {
      if (++grid[static_cast<std::size_t>(a)] < nodes_per_axis) break;
      grid[static_cast<std::size_t>(a)] = 0;
    }
  }

  auto tables = polynomial_tables(p, max_order, points);
  OverlapGram out;
  std::vector<Eigen::VectorXcd> columns;
  for (int m = 0; m <= max_order; ++m) {
    auto level = lex_enumerate(d, m);
    auto norms = packet_normalizers(d, m);
    for (std::size_t i = 0; i < level.size(); ++i) {
      out.labels.emplace_back(m, level[i]);
      columns.push_back(norms[i] *
                        tables[static_cast<std::size_t>(m)].col(
                            static_cast<Eigen::Index>(i)));
    }
  }
  Eigen::Index total = static_cast<Eigen::Index>(columns.size());
  out.gram.resize(total, total);
  double prefactor = std::pow(std::numbers::pi, -0.5 * d);
  for (Eigen::Index a = 0; a < total; ++a)
    for (Eigen::Index b = 0; b < total; ++b) {
      cplx acc{0.0};
      for (std::int64_t g = 0; g < npts; ++g)
        acc += total_weight(g) *
               std::conj(columns[static_cast<std::size_t>(a)](g)) *
               columns[static_cast<std::size_t>(b)](g);
      out.gram(a, b) = prefactor * acc;
    }
  return out;
}

// Valid parameter pairs for randomized checks: a symmetric complex width
// with positive definite real part seeds an exactly-valid pair, which is
// then pushed along the harmonic flow and a random unitary.  Each step
// stays on the constraint manifold.
inline ParamPair random_valid_pair(int d, double hbar, SplitMix64& rng) {
  RealMatrix q = random_real_orthogonal(d, rng);
  Eigen::VectorXd lambda(d);
  for (int i = 0; i < d; ++i) lambda(i) = rng.uniform(0.5, 2.0);
  Eigen::MatrixXd g = q * lambda.asDiagonal() * q.transpose();
  Eigen::MatrixXd s(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = 0.5 * rng.normal();
  Eigen::MatrixXd g_inv_half =
      q * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  ComplexMatrix a = g_inv_half.cast<cplx>();
  ComplexMatrix z = g.cast<cplx>() + cplx{0.0, 1.0} * s.cast<cplx>();
  ComplexMatrix b = z * a;
  auto [a_t, b_t] = harmonic_flow(a, b, rng.uniform(0.0, 2.0 * std::numbers::pi));
  ComplexMatrix u = random_unitary(d, rng);
  return validate_params(ComplexMatrix(a_t * u), ComplexMatrix(b_t * u), hbar);
}

}  // namespace symkron::hagedorn
