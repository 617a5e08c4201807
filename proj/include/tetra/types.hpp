#pragma once

#include <Eigen/Dense>

namespace tetra {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

inline constexpr int kParticles = 4;
inline constexpr int kDim = 3 * kParticles;

}  // namespace tetra
