#pragma once

#include "sgdnet/model.hpp"

#include <cstdint>
#include <filesystem>

namespace sgdnet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    ModelParams params;
    double c = 0.35;
    int k_steps = 10;
};

/// "SGDN", u32 version, u64 d0, u64 d, u64 L, f64 c, u64 K, then w_in, per-layer
/// w_t and w_n, w_head as little-endian f64 row-major.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sgdnet
