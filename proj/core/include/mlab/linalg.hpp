#pragma once

#include <Eigen/Core>

namespace mlab {

// Largest ambient dimension any built-in surface uses (three-circle product
// torus in R^6). Fixed maximum storage keeps per-node frames off the heap.
inline constexpr int kMaxAmbient = 6;
inline constexpr int kMaxIntrinsic = 6;

using AmbientVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;
using AmbientMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                                    kMaxAmbient, kMaxAmbient>;
using SmallVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxIntrinsic, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                                  kMaxIntrinsic, kMaxIntrinsic>;

}  // namespace mlab
