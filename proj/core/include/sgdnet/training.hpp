#pragma once

#include "sgdnet/diffusion.hpp"
#include "sgdnet/errors.hpp"
#include "sgdnet/graph.hpp"
#include "sgdnet/model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sgdnet {

/// One gradient matrix per parameter matrix, same shapes and order.
using Gradients = ModelParams;

/// Signature of the diffusion reverse pass; injectable so verification can mutate it.
using DiffusionAdjoint = std::function<Matrix(const NormalizedAdjacency&, const Matrix& grad_p,
                                              const Matrix& grad_m, const DiffusionConfig&)>;

/// Reverse-mode gradients of loss_total given ∂(data loss)/∂logits, including 2λΘ.
Gradients backward(const NormalizedAdjacency& na, const Matrix& x, const ModelParams& params,
                   const ForwardResult& forward, const EdgeBatch& batch, const Matrix& grad_logits,
                   double lambda, const DiffusionAdjoint& adjoint = diffuse_adjoint);

struct LossAndGradients {
    double loss = 0.0;       // cross-entropy + λ‖Θ‖²
    double data_loss = 0.0;  // cross-entropy only
    Gradients grads;
};

LossAndGradients loss_and_gradients(const NormalizedAdjacency& na, const Matrix& x,
                                    const ModelParams& params, const DiffusionConfig& cfg,
                                    const EdgeBatch& batch, double lambda,
                                    const DiffusionAdjoint& adjoint = diffuse_adjoint);

struct AdamConfig {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    ModelParams first_moment;
    ModelParams second_moment;
    std::int64_t step = 0;

    static AdamState for_params(const ModelParams& params);
};

/// Bias-corrected Adam. Weight decay is not applied here; it lives in the loss gradient.
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& cfg);

struct TrainConfig {
    int dim = 32;
    int layers = 1;
    double c = 0.35;
    int k_steps = 10;
    M0Mode m0_mode = M0Mode::uniform;
    double weight_decay = 0.001;
    int epochs = 100;
    AdamConfig adam;
    std::uint64_t seed = 0;

    void validate() const;
    /// M⁰ seed follows derive_seed(seed, Stream::m0, epoch).
    DiffusionConfig diffusion(int epoch) const;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_history;  // loss before each epoch's update
};

/// Thrown when the loss becomes non-finite. Carries the last parameters with a finite loss.
class TrainingAborted : public NumericError {
public:
    TrainingAborted(const std::string& what, int epoch, ModelParams last_good)
        : NumericError(what), epoch_(epoch), last_good_(std::move(last_good)) {}

    int epoch() const noexcept { return epoch_; }
    const ModelParams& last_good() const noexcept { return last_good_; }

private:
    int epoch_;
    ModelParams last_good_;
};

using EpochCallback = std::function<void(int epoch, double loss)>;

/// Full-batch training on every edge of `train_graph`; the graph is also the diffusion graph.
TrainResult train(const SignedDigraph& train_graph, const Matrix& x, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// Parameters initialised exactly as train() would for this config.
ModelParams initial_params(Eigen::Index input_dim, const TrainConfig& cfg);

struct GradCheckConfig {
    NodeId nodes = 6;
    int input_dim = 4;
    int dim = 3;
    int layers = 2;
    int k_steps = 3;
    double c = 0.5;
    std::size_t edges = 10;
    double lambda = 0.001;
    double step = 1e-6;
    double tolerance = 1e-4;
};

struct GradCheckEntry {
    std::string name;
    double max_rel_error = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double worst = 0.0;
    bool passed = false;
};

/// Compares analytic gradients against central finite differences on a random toy
/// instance (random signed digraph, features, parameters, edge labels; M⁰ = 0).
/// Per matrix: ‖analytic − numeric‖_∞ / max(‖analytic‖_∞, ‖numeric‖_∞).
GradCheckReport grad_check(const GradCheckConfig& cfg, std::uint64_t seed,
                           const DiffusionAdjoint& adjoint = diffuse_adjoint);

}  // namespace sgdnet
