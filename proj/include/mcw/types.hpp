#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace mcw {

using Index = Eigen::Index;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using CMatrix = ComplexMatrix<double>;
using CVector = ComplexVector<double>;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace mcw
