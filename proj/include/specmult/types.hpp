#pragma once

#include <complex>
#include <Eigen/Dense>

namespace specmult {

using cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace specmult
