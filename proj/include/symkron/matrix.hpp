#pragma once

#include <complex>

#include <Eigen/Dense>

namespace symkron {

using cplx = std::complex<double>;

// Dense matrices are row-major to match the wire format.
using ComplexMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1>;

inline ComplexMatrix complex_identity(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

// Largest singular value ratio; infinity when numerically singular.
inline double condition_number(const ComplexMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace symkron
