#pragma once

#include "sgdnet/diffusion.hpp"
#include "sgdnet/graph.hpp"
#include "sgdnet/matrix.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sgdnet {

struct LayerParams {
    Matrix w_t;  // d x d feature transform
    Matrix w_n;  // 2d x d mixing of [P || M]
};

/// All trainable matrices. w_in projects the d0-wide input features to the uniform
/// hidden width d so every skip connection is well-typed.
struct ModelParams {
    Matrix w_in;                      // d0 x d
    std::vector<LayerParams> layers;  // L entries
    Matrix w_head;                    // 2d x 2, column 0 scores "+", column 1 scores "−"

    Eigen::Index input_dim() const { return w_in.rows(); }
    Eigen::Index hidden_dim() const { return w_in.cols(); }
    int num_layers() const { return static_cast<int>(layers.size()); }

    /// Visits every matrix in a fixed order with a stable name ("w_in", "layer0.w_t", ...).
    void for_each(const std::function<void(const std::string&, Matrix&)>& fn);
    void for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const;

    /// Pointers to every matrix in for_each order.
    std::vector<Matrix*> matrices();
    std::vector<const Matrix*> matrices() const;

    /// Same shapes, all zeros.
    ModelParams zeros_like() const;
    bool all_finite() const;
};

/// Uniform(−√(1/fan_in), √(1/fan_in)) per matrix, fan_in = row count.
ModelParams init_params(int d0, int d, int num_layers, std::uint64_t seed);

struct EdgeBatch {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<Sign> labels;

    static EdgeBatch from_edges(std::span<const SignedEdge> edges);
    std::size_t size() const { return pairs.size(); }
};

/// Intermediates of one SGD layer needed by the backward pass.
struct LayerCache {
    Matrix h_prev;      // H⁽ˡ⁻¹⁾
    Matrix pm;          // [P || M] after K diffusion steps, n x 2d
    Matrix h_next;      // H⁽ˡ⁾ = tanh([P || M]·w_n + H⁽ˡ⁻¹⁾)
    DiffusionConfig diffusion;
};

struct LayerOutput {
    Matrix h_next;
    LayerCache cache;
};

/// H̃ = h_prev·w_t; (P, M) = diffuse(H̃); H = tanh([P || M]·w_n + h_prev).
/// Throws NumericError on non-finite activations.
LayerOutput layer_forward(const NormalizedAdjacency& na, const Matrix& h_prev,
                          const LayerParams& params, const DiffusionConfig& cfg);

struct ForwardResult {
    Matrix h_final;
    std::vector<LayerCache> layers;
};

/// Diffusion config of layer l; M⁰ seeds differ per layer.
DiffusionConfig layer_diffusion_config(const DiffusionConfig& cfg, int layer);

/// H⁰ = X·w_in followed by L SGD layers.
ForwardResult model_forward(const NormalizedAdjacency& na, const Matrix& x,
                            const ModelParams& params, const DiffusionConfig& cfg);

/// logits[i] = [h_u || h_v]·w_head for pair i = (u, v). No bias.
Matrix edge_logits(const Matrix& h_final, const EdgeBatch& batch, const Matrix& w_head);

constexpr Eigen::Index class_index(Sign s) { return s == Sign::positive ? 0 : 1; }

struct CrossEntropy {
    double loss = 0.0;   // mean over edges
    Matrix grad_logits;  // ∂loss/∂logits
};

/// Mean over edges of −log softmax(logits)[true class], max-subtracted.
CrossEntropy softmax_cross_entropy(const Matrix& logits, std::span<const Sign> labels);

/// Σ‖Θᵢ‖²_F over every parameter matrix.
double squared_norm(const ModelParams& params);

/// Cross-entropy plus lambda·Σ‖Θᵢ‖²_F.
double loss_total(const Matrix& logits, std::span<const Sign> labels, const ModelParams& params,
                  double lambda);

/// Row-wise softmax probability of "+".
Vector positive_probability(const Matrix& logits);

}  // namespace sgdnet
