#pragma once

#include "sgdnet/features.hpp"
#include "sgdnet/graph.hpp"
#include "sgdnet/metrics.hpp"
#include "sgdnet/model.hpp"
#include "sgdnet/training.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sgdnet {

struct ExperimentConfig {
    int svd_rank = 128;
    int svd_oversample = 10;
    int svd_power_iters = 2;
    double test_ratio = 0.2;
    TrainConfig train;  // train.seed is replaced by the run seed

    void validate() const;
};

struct EdgePrediction {
    NodeId u = 0;
    NodeId v = 0;
    Sign label = Sign::positive;
    double p_plus = 0.5;
    Sign pred = Sign::positive;
};

/// Diffusion config for scoring: M⁰ drawn from the run's eval sub-stream.
DiffusionConfig eval_diffusion_config(const TrainConfig& cfg);

/// Forward pass on the (training) diffusion graph, then p(+) for every edge.
std::vector<EdgePrediction> predict_edges(const NormalizedAdjacency& na, const Matrix& x,
                                          const ModelParams& params, const DiffusionConfig& cfg,
                                          std::span<const SignedEdge> edges);

MetricReport evaluate_predictions(std::span<const EdgePrediction> preds);

/// Split → SVD features of the training graph → train → score the test edges.
/// Sub-streams: split_edges(derive(seed, split)), features(derive(seed, svd)),
/// training config seed = seed.
struct PreparedSplit {
    Split split;
    SignedDigraph train_graph;
    FeatureMatrix features;
};

PreparedSplit prepare_split(const EdgeList& data, const ExperimentConfig& cfg, std::uint64_t seed);

struct SeedRun {
    std::uint64_t seed = 0;
    MetricReport metrics;
    double final_loss = 0.0;
};

SeedRun run_seed(const EdgeList& data, const ExperimentConfig& cfg, std::uint64_t seed);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample (n−1) standard deviation, 0 for one sample
    std::size_t count = 0;
};

MeanStd mean_std(std::span<const double> values);

struct ExperimentResult {
    std::string dataset;
    std::vector<SeedRun> runs;
    MeanStd auc;
    MeanStd f1_macro;
    bool aborted = false;  // a seed failed; runs holds the completed ones
    std::string error;
};

using SeedCallback = std::function<void(const SeedRun&)>;

/// Seeds base_seed .. base_seed + n_seeds − 1.
ExperimentResult run_experiment(const std::string& dataset, const EdgeList& data,
                                const ExperimentConfig& cfg, int n_seeds,
                                std::uint64_t base_seed = 0, const SeedCallback& on_seed = {});

void summarize(ExperimentResult& r);

/// `dataset,seed,auc,f1_macro` rows followed by `mean` and `std` summary rows.
void write_experiment_csv(std::ostream& out, const ExperimentResult& r);
/// AUC and F1-macro as mean±std columns.
std::string format_experiment_table(std::span<const ExperimentResult> results);

}  // namespace sgdnet
