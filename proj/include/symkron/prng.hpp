#pragma once

// Seeded randomness for checks and benchmarks: splitmix64 (64-bit state),
// so any failing case replays from its seed.  Gaussian variates use
// Box-Muller on top of the integer stream.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "symkron/matrix.hpp"

namespace symkron {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    // Box-Muller; u clamped away from zero for the logarithm
    double u = uniform01();
    double v = uniform01();
    if (u <= 0.0) u = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  cplx complex_normal() {
    double u = uniform01();
    double v = uniform01();
    if (u <= 0.0) u = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u));
    return cplx{r * std::cos(2.0 * std::numbers::pi * v),
                r * std::sin(2.0 * std::numbers::pi * v)};
  }
};

inline ComplexMatrix random_complex_matrix(int d, SplitMix64& rng) {
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.complex_normal();
  return m;
}

// Ginibre draw rescaled to unit spectral norm; keeps compressed products of
// any order at O(1) entry magnitudes.
inline ComplexMatrix random_matrix_unit_norm(int d, SplitMix64& rng) {
  ComplexMatrix m = random_complex_matrix(d, rng);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return m / svd.singularValues().maxCoeff();
}

// Haar-like unitary: QR of a Ginibre draw with the R diagonal phases
// absorbed into Q.
inline ComplexMatrix random_unitary(int d, SplitMix64& rng) {
  Eigen::MatrixXcd g = random_complex_matrix(d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    cplx rj = r(j, j);
    cplx phase = (std::abs(rj) > 0.0) ? rj / std::abs(rj) : cplx{1.0};
    q.col(j) *= phase;
  }
  return ComplexMatrix(q);
}

inline RealMatrix random_real_orthogonal(int d, SplitMix64& rng) {
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return RealMatrix(q);
}

// Invertible draw with singular values in [smin, smax]; controls the
// condition number of downstream products.
inline ComplexMatrix random_matrix_conditioned(int d, SplitMix64& rng,
                                               double smin = 0.5,
                                               double smax = 2.0) {
  ComplexMatrix u = random_unitary(d, rng);
  ComplexMatrix v = random_unitary(d, rng);
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i)
    s(i) = smin * std::pow(smax / smin, rng.uniform01());
  return ComplexMatrix(u * s.asDiagonal() * v.adjoint());
}

}  // namespace symkron
