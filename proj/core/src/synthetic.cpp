#include "sgdnet/synthetic.hpp"

#include "sgdnet/errors.hpp"

#include <unordered_set>

namespace sgdnet {

std::vector<SignedEdge> random_signed_edges(NodeId n, std::size_t m, double negative_fraction,
                                            Rng& rng, bool allow_self_loops) {
    const std::uint64_t slots = static_cast<std::uint64_t>(n) * n - (allow_self_loops ? 0 : n);
    if (m > slots) throw ArgumentError("random_signed_edges: too many edges for n");
    std::unordered_set<std::uint64_t> seen;
    std::vector<SignedEdge> out;
    out.reserve(m);
    while (out.size() < m) {
        const auto u = static_cast<NodeId>(rng() % n);
        const auto v = static_cast<NodeId>(rng() % n);
        if (u == v && !allow_self_loops) continue;
        if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) continue;
        const Sign s = uniform(rng, 0.0, 1.0) < negative_fraction ? Sign::negative : Sign::positive;
        out.push_back({u, v, s});
    }
    return out;
}

std::vector<SignedEdge> planted_partition_edges(NodeId n, int out_degree, double cross_fraction,
                                                Rng& rng) {
    if (n < 4 || out_degree < 1 || static_cast<NodeId>(out_degree) >= n / 2) {
        throw ArgumentError("planted_partition_edges: need n >= 4 and 1 <= out_degree < n/2");
    }
    const NodeId half = n / 2;
    const auto camp = [half](NodeId u) { return u < half ? 0 : 1; };
    std::vector<SignedEdge> out;
    for (NodeId u = 0; u < n; ++u) {
        std::unordered_set<NodeId> targets;
        while (targets.size() < static_cast<std::size_t>(out_degree)) {
            const bool cross = uniform(rng, 0.0, 1.0) < cross_fraction;
            const NodeId lo = (camp(u) == 0) != cross ? 0 : half;
            const NodeId hi = lo == 0 ? half : n;
            const auto v = static_cast<NodeId>(lo + rng() % (hi - lo));
            if (v == u || !targets.insert(v).second) continue;
            out.push_back({u, v, camp(u) == camp(v) ? Sign::positive : Sign::negative});
        }
    }
    return out;
}

std::vector<SignedEdge> reputation_edges(NodeId n, int out_degree, double distrusted_fraction,
                                         double noise, Rng& rng) {
    if (n < 2 || out_degree < 1 || static_cast<NodeId>(out_degree) >= n) {
        throw ArgumentError("reputation_edges: need n >= 2 and 1 <= out_degree < n");
    }
    std::vector<bool> distrusted(n);
    for (NodeId u = 0; u < n; ++u) distrusted[u] = uniform(rng, 0.0, 1.0) < distrusted_fraction;
    std::vector<SignedEdge> out;
    for (NodeId u = 0; u < n; ++u) {
        std::unordered_set<NodeId> targets;
        while (targets.size() < static_cast<std::size_t>(out_degree)) {
            const auto v = static_cast<NodeId>(rng() % n);
            if (v == u || !targets.insert(v).second) continue;
            const bool flip = uniform(rng, 0.0, 1.0) < noise;
            out.push_back({u, v, distrusted[v] != flip ? Sign::negative : Sign::positive});
        }
    }
    return out;
}

std::vector<SignedEdge> replicate_edges(const std::vector<SignedEdge>& edges, NodeId n,
                                        int copies) {
    std::vector<SignedEdge> out;
    out.reserve(edges.size() * static_cast<std::size_t>(copies));
    for (int c = 0; c < copies; ++c) {
        const NodeId shift = n * static_cast<NodeId>(c);
        for (const auto& e : edges) out.push_back({e.src + shift, e.dst + shift, e.sign});
    }
    return out;
}

}  // namespace sgdnet
