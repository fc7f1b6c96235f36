#pragma once

#include "sgdnet/matrix.hpp"
#include "sgdnet/sparse.hpp"

#include <cstdint>

namespace sgdnet {

struct SvdResult {
    Matrix u;  // rows x rank, orthonormal columns
    Vector s;  // rank, non-increasing, non-negative
    Matrix v;  // cols x rank, orthonormal columns
};

struct RandomizedSvdOptions {
    int rank = 128;
    int oversample = 10;
    int power_iters = 2;
    std::uint64_t seed = 0;
};

/// Halko-style randomized truncated SVD: Gaussian range sketch, QR-orthonormalized
/// power iterations, then an exact SVD of the small projected matrix.
///
/// The sketch width is rank + oversample clamped to min(rows, cols). Singular vector
/// signs are fixed so the largest-magnitude entry of every U column is positive.
/// Throws ArgumentError if rank < 1 or rank > min(rows, cols).
SvdResult randomized_svd(const CsrMatrix& m, const RandomizedSvdOptions& opts);

}  // namespace sgdnet
