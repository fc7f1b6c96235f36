#pragma once

#include "sgdnet/graph.hpp"
#include "sgdnet/random.hpp"

#include <vector>

namespace sgdnet {

/// `m` distinct directed pairs drawn uniformly (self-loops allowed when `allow_self_loops`),
/// each signed negative with probability `negative_fraction`. Requires m <= n².
std::vector<SignedEdge> random_signed_edges(NodeId n, std::size_t m, double negative_fraction,
                                            Rng& rng, bool allow_self_loops = false);

/// Two equal camps; every node draws `out_degree` distinct targets, `+` inside its camp
/// and `−` across. camp_of(u) = u < n/2 ? 0 : 1.
std::vector<SignedEdge> planted_partition_edges(NodeId n, int out_degree,
                                                double cross_fraction, Rng& rng);

/// Every node draws `out_degree` distinct targets. A random `distrusted_fraction` of the
/// nodes receive "−" edges and the rest "+"; each sign is then flipped with probability `noise`.
std::vector<SignedEdge> reputation_edges(NodeId n, int out_degree, double distrusted_fraction,
                                         double noise, Rng& rng);

/// Disjoint union of `copies` relabelled copies of `edges` over `n` nodes.
std::vector<SignedEdge> replicate_edges(const std::vector<SignedEdge>& edges, NodeId n,
                                        int copies);

}  // namespace sgdnet
