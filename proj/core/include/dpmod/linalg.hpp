#pragma once

#include <Eigen/Core>

namespace dpmod {

// Everything lives in dimension <= 3, so fixed-capacity storage keeps the
// per-cell math allocation free.
inline constexpr int kMaxDim = 3;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
/// n x (n+1): maps the vertex values of a simplex to its chart covector.
using GradientMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim + 1>;

}  // namespace dpmod
