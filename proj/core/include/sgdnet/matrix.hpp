#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace sgdnet {

using NodeId = std::uint32_t;
using Offset = std::uint64_t;

/// Dense row-major matrix; rows are nodes throughout the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// Maximum absolute column sum.
inline double norm_l1(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace sgdnet
