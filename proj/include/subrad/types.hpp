#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>

namespace subrad {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Rate of population loss for an eigenvalue of a non-Hermitian generator.
inline double decay_rate(cplx lambda) noexcept { return -2.0 * lambda.imag(); }

}  // namespace subrad
