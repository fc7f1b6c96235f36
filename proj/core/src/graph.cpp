#include "sgdnet/graph.hpp"

#include "sgdnet/errors.hpp"

#include <cstdio>
#include <string>
#include <unordered_map>

namespace sgdnet {

namespace {

std::uint64_t pair_key(NodeId src, NodeId dst) {
    return (static_cast<std::uint64_t>(src) << 32) | dst;
}

// Keeps the last occurrence of every (src, dst) pair, at that occurrence's position.
std::vector<SignedEdge> dedup_keep_last(std::vector<SignedEdge> edges) {
    std::unordered_map<std::uint64_t, std::size_t> last;
    last.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) last[pair_key(edges[i].src, edges[i].dst)] = i;
    if (last.size() == edges.size()) return edges;
    std::vector<SignedEdge> out;
    out.reserve(last.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (last[pair_key(edges[i].src, edges[i].dst)] == i) out.push_back(edges[i]);
    }
    return out;
}

}  // namespace

SignedDigraph::SignedDigraph(std::vector<SignedEdge> edges, NodeId n)
    : n_(n), edges_(dedup_keep_last(std::move(edges))), out_degree_(n, 0) {
    std::vector<Triplet> plus;
    std::vector<Triplet> minus;
    for (const auto& e : edges_) {
        if (e.src >= n || e.dst >= n) {
            throw ArgumentError("build_graph: edge (" + std::to_string(e.src) + " -> " +
                                std::to_string(e.dst) + ") out of range for n=" +
                                std::to_string(n));
        }
        if (e.sign != Sign::positive && e.sign != Sign::negative) {
            throw ArgumentError("build_graph: sign must be +1 or -1");
        }
        (e.sign == Sign::positive ? plus : minus).push_back({e.src, e.dst, 1.0});
        ++out_degree_[e.src];
    }
    a_plus_ = CsrMatrix::from_triplets(n, n, std::move(plus));
    a_minus_ = CsrMatrix::from_triplets(n, n, std::move(minus));
}

CsrMatrix SignedDigraph::signed_adjacency() const {
    std::vector<Triplet> t;
    t.reserve(edges_.size());
    for (const auto& e : edges_) t.push_back({e.src, e.dst, static_cast<double>(to_int(e.sign))});
    return CsrMatrix::from_triplets(n_, n_, std::move(t));
}

NormalizedAdjacency normalize(const SignedDigraph& g) {
    const auto deg = g.out_degree();
    std::vector<double> inv(deg.size(), 0.0);
    for (std::size_t u = 0; u < deg.size(); ++u) inv[u] = deg[u] ? 1.0 / deg[u] : 0.0;

    NormalizedAdjacency na;
    na.plus = g.a_plus().scale_rows(inv);
    na.minus = g.a_minus().scale_rows(inv);
    na.plus_t = na.plus.transpose();
    na.minus_t = na.minus.transpose();
    return na;
}

Vector column_sums_of_b(const NormalizedAdjacency& na) {
    const NodeId n = na.num_nodes();
    // Column u of both block columns collects row u of Ã₊ and row u of Ã₋.
    Vector b(n);
    for (NodeId u = 0; u < n; ++u) b[u] = na.plus.row_sum(u) + na.minus.row_sum(u);
    Vector out(2 * static_cast<Eigen::Index>(n));
    out << b, b;
    return out;
}

GraphSummary summarize(const SignedDigraph& g) {
    return {g.num_nodes(), g.num_edges(), g.num_positive(), g.num_negative()};
}

std::string format_summary(const std::string& name, const GraphSummary& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-16s %10u %10zu %10zu %10zu %8.2f%% %8.2f%%\n", name.c_str(),
                  s.nodes, s.edges, s.positive, s.negative, 100.0 * s.positive_ratio(),
                  100.0 * s.negative_ratio());
    std::string header;
    char hdr[256];
    std::snprintf(hdr, sizeof hdr, "%-16s %10s %10s %10s %10s %9s %9s\n", "dataset", "|V|", "|E|",
                  "|E+|", "|E-|", "rho(+)", "rho(-)");
    return std::string(hdr) + buf;
}

}  // namespace sgdnet
