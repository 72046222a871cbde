#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace vortex {

using cplx = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace vortex
