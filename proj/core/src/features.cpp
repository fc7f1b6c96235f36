#include "sgdnet/features.hpp"

#include "sgdnet/binary_io.hpp"
#include "sgdnet/errors.hpp"
#include "sgdnet/svd.hpp"

#include <fstream>

namespace sgdnet {

FeatureMatrix init_features(const SignedDigraph& g, int rank, std::uint64_t seed, int oversample,
                            int power_iters) {
    if (rank < 1 || static_cast<NodeId>(rank) > g.num_nodes()) {
        throw ArgumentError("init_features: rank must be in [1, n]");
    }
    const SvdResult svd = randomized_svd(g.signed_adjacency(), {rank, oversample, power_iters, seed});
    FeatureMatrix x{svd.u * svd.s.asDiagonal()};
    if (!x.data.allFinite()) throw NumericError("init_features: non-finite features");
    return x;
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    binary::write_magic(out, "SGDF");
    binary::write_le<std::uint32_t>(out, kFeatureFileVersion);
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(x.num_nodes()));
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(x.dim()));
    binary::write_matrix(out, x.data);
    if (!out) throw DataError("write failed for " + path.string());
}

FeatureMatrix load_features(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    binary::expect_magic(in, "SGDF", path.string());
    const auto version = binary::read_le<std::uint32_t>(in);
    if (version != kFeatureFileVersion) {
        throw DataError(path.string() + ": unsupported feature file version " +
                        std::to_string(version));
    }
    const auto n = binary::read_le<std::uint64_t>(in);
    const auto d = binary::read_le<std::uint64_t>(in);
    FeatureMatrix x{binary::read_matrix(in, static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(d))};
    if (in.peek() != std::char_traits<char>::eof()) {
        throw DataError(path.string() + ": trailing bytes after feature payload");
    }
    if (!x.data.allFinite()) throw DataError(path.string() + ": non-finite feature values");
    return x;
}

}  // namespace sgdnet
