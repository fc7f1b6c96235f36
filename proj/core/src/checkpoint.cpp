#include "sgdnet/checkpoint.hpp"

#include "sgdnet/binary_io.hpp"
#include "sgdnet/errors.hpp"

#include <fstream>

namespace sgdnet {

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    const auto& p = ckpt.params;
    binary::write_magic(out, "SGDN");
    binary::write_le<std::uint32_t>(out, kCheckpointVersion);
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(p.input_dim()));
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(p.hidden_dim()));
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(p.num_layers()));
    binary::write_le<double>(out, ckpt.c);
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(ckpt.k_steps));
    p.for_each([&out](const std::string&, const Matrix& m) { binary::write_matrix(out, m); });
    if (!out) throw DataError("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    binary::expect_magic(in, "SGDN", path.string());
    const auto version = binary::read_le<std::uint32_t>(in);
    if (version != kCheckpointVersion) {
        throw DataError(path.string() + ": unsupported checkpoint version " +
                        std::to_string(version));
    }
    const auto d0 = static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in));
    const auto d = static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in));
    const auto layers = binary::read_le<std::uint64_t>(in);
    Checkpoint ckpt;
    ckpt.c = binary::read_le<double>(in);
    ckpt.k_steps = static_cast<int>(binary::read_le<std::uint64_t>(in));
    if (d0 < 1 || d < 1 || layers < 1 || layers > 1024 || d0 > (1 << 20) || d > (1 << 20)) {
        throw DataError(path.string() + ": implausible checkpoint header");
    }

    auto& p = ckpt.params;
    p.w_in = binary::read_matrix(in, d0, d);
    for (std::uint64_t l = 0; l < layers; ++l) {
        LayerParams lp;
        lp.w_t = binary::read_matrix(in, d, d);
        lp.w_n = binary::read_matrix(in, 2 * d, d);
        p.layers.push_back(std::move(lp));
    }
    p.w_head = binary::read_matrix(in, 2 * d, 2);
    if (in.peek() != std::char_traits<char>::eof()) {
        throw DataError(path.string() + ": trailing bytes after checkpoint payload");
    }
    if (!p.all_finite()) throw DataError(path.string() + ": non-finite parameters");
    return ckpt;
}

}  // namespace sgdnet
