#pragma once

#include "sgdnet/graph.hpp"
#include "sgdnet/matrix.hpp"

#include <cstdint>
#include <filesystem>

namespace sgdnet {

/// Initial node features, one row per node.
struct FeatureMatrix {
    Matrix data;

    Eigen::Index num_nodes() const { return data.rows(); }
    Eigen::Index dim() const { return data.cols(); }
};

/// X = U·diag(S) from a randomized SVD of the ±1 signed adjacency A₊ − A₋.
FeatureMatrix init_features(const SignedDigraph& g, int rank, std::uint64_t seed,
                            int oversample = 10, int power_iters = 2);

inline constexpr std::uint32_t kFeatureFileVersion = 1;

/// Binary layout: "SGDF", u32 version, u64 n, u64 d, n*d little-endian f64 row-major.
void save_features(const std::filesystem::path& path, const FeatureMatrix& x);
FeatureMatrix load_features(const std::filesystem::path& path);

}  // namespace sgdnet
