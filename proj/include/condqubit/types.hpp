#pragma once

#include <complex>

#include <Eigen/Dense>

namespace condqubit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Mat2c = Eigen::Matrix2cd;

// Smallest eigenvalue accepted as nonnegative; anything in [-kPositivityTol, 0) is clipped.
inline constexpr double kPositivityTol = 1e-10;
// Outcomes with probability below this are treated as unreachable.
inline constexpr double kZeroProbability = 1e-14;

} // namespace condqubit
