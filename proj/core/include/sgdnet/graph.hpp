#pragma once

#include "sgdnet/matrix.hpp"
#include "sgdnet/sparse.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sgdnet {

enum class Sign : std::int8_t { negative = -1, positive = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }

struct SignedEdge {
    NodeId src = 0;
    NodeId dst = 0;
    Sign sign = Sign::positive;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

enum class EdgeFormat {
    tsv_sign,    // src<TAB>dst<TAB>{1,-1}, '#' comment lines
    csv_rating,  // SOURCE,TARGET,RATING,TIME with a nonzero RATING
};

EdgeFormat parse_edge_format(const std::string& name);
std::string to_string(EdgeFormat f);

/// Edges in dense id space plus the raw id of every dense id (first-appearance order).
struct EdgeList {
    std::vector<SignedEdge> edges;
    NodeId num_nodes = 0;
    std::vector<std::string> raw_ids;
};

/// Reads an edge file; `.gz` paths are decompressed transparently.
/// Duplicate (src, dst) pairs keep the last occurrence.
EdgeList load_edge_list(const std::filesystem::path& path, EdgeFormat format);
EdgeList parse_edge_list(std::istream& in, EdgeFormat format);

/// Dense-id edges as TSV, `src\tdst\tsign`. No id remapping on read.
void write_edges_tsv(const std::filesystem::path& path, std::span<const SignedEdge> edges);
std::vector<SignedEdge> read_edges_tsv(const std::filesystem::path& path);

void write_id_map(const std::filesystem::path& path, std::span<const std::string> raw_ids);
std::vector<std::string> read_id_map(const std::filesystem::path& path);

/// Immutable signed directed graph with per-sign CSR adjacency.
class SignedDigraph {
public:
    SignedDigraph() = default;
    /// Throws ArgumentError when an endpoint is >= n. Repeated (src, dst) keep the last edge.
    SignedDigraph(std::vector<SignedEdge> edges, NodeId n);

    NodeId num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::size_t num_positive() const noexcept { return a_plus_.nnz(); }
    std::size_t num_negative() const noexcept { return a_minus_.nnz(); }

    std::span<const SignedEdge> edges() const noexcept { return edges_; }
    const CsrMatrix& a_plus() const noexcept { return a_plus_; }
    const CsrMatrix& a_minus() const noexcept { return a_minus_; }
    std::span<const std::uint32_t> out_degree() const noexcept { return out_degree_; }

    bool is_deadend(NodeId u) const { return out_degree_[u] == 0; }

    /// A₊ − A₋ with ±1 entries.
    CsrMatrix signed_adjacency() const;

private:
    NodeId n_ = 0;
    std::vector<SignedEdge> edges_;
    CsrMatrix a_plus_;
    CsrMatrix a_minus_;
    std::vector<std::uint32_t> out_degree_;
};

inline SignedDigraph build_graph(std::vector<SignedEdge> edges, NodeId n) {
    return SignedDigraph(std::move(edges), n);
}

/// Ã_s = D⁻¹A_s for both signs, with transposes materialized for left-multiplication.
/// Deadend rows are all-zero.
struct NormalizedAdjacency {
    CsrMatrix plus;
    CsrMatrix minus;
    CsrMatrix plus_t;
    CsrMatrix minus_t;

    NodeId num_nodes() const noexcept { return plus.rows(); }
    Offset nnz() const noexcept { return plus.nnz() + minus.nnz(); }
};

NormalizedAdjacency normalize(const SignedDigraph& g);

/// 1ᵀB̃ for the block operator B̃ = [Ã₊ᵀ Ã₋ᵀ; Ã₋ᵀ Ã₊ᵀ], computed blockwise as [b; b]
/// with b_u the u-th row sum of Ã₊ + Ã₋. Length 2n.
Vector column_sums_of_b(const NormalizedAdjacency& na);

struct GraphSummary {
    NodeId nodes = 0;
    std::size_t edges = 0;
    std::size_t positive = 0;
    std::size_t negative = 0;

    double positive_ratio() const { return edges ? static_cast<double>(positive) / edges : 0.0; }
    double negative_ratio() const { return edges ? static_cast<double>(negative) / edges : 0.0; }
};

GraphSummary summarize(const SignedDigraph& g);
/// One-row table: |V|, |E|, |E+|, |E-|, rho(+), rho(-).
std::string format_summary(const std::string& name, const GraphSummary& s);

}  // namespace sgdnet
