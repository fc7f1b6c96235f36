#include "sgdnet/experiment.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/random.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sgdnet {

void ExperimentConfig::validate() const {
    if (svd_rank < 1) throw ArgumentError("svd rank must be >= 1");
    if (svd_oversample < 0 || svd_power_iters < 0) {
        throw ArgumentError("svd oversample and power iterations must be >= 0");
    }
    if (!(test_ratio > 0.0 && test_ratio < 1.0)) throw ArgumentError("ratio must lie in (0, 1)");
    train.validate();
}

DiffusionConfig eval_diffusion_config(const TrainConfig& cfg) {
    return {cfg.c, cfg.k_steps, cfg.m0_mode, derive_seed(cfg.seed, Stream::eval)};
}

std::vector<EdgePrediction> predict_edges(const NormalizedAdjacency& na, const Matrix& x,
                                          const ModelParams& params, const DiffusionConfig& cfg,
                                          std::span<const SignedEdge> edges) {
    const ForwardResult fwd = model_forward(na, x, params, cfg);
    const EdgeBatch batch = EdgeBatch::from_edges(edges);
    const Vector p = positive_probability(edge_logits(fwd.h_final, batch, params.w_head));
    std::vector<EdgePrediction> out;
    out.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double pp = p[static_cast<Eigen::Index>(i)];
        out.push_back({edges[i].src, edges[i].dst, edges[i].sign, pp, predicted_sign(pp)});
    }
    return out;
}

MetricReport evaluate_predictions(std::span<const EdgePrediction> preds) {
    std::vector<double> scores;
    std::vector<Sign> labels;
    scores.reserve(preds.size());
    labels.reserve(preds.size());
    for (const auto& p : preds) {
        scores.push_back(p.p_plus);
        labels.push_back(p.label);
    }
    return evaluate(scores, labels);
}

PreparedSplit prepare_split(const EdgeList& data, const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    PreparedSplit out;
    out.split = split_edges(data.edges, cfg.test_ratio, derive_seed(seed, Stream::split));
    out.train_graph = SignedDigraph(out.split.train, data.num_nodes);
    const int rank = std::min<int>(cfg.svd_rank, static_cast<int>(data.num_nodes));
    out.features = init_features(out.train_graph, rank, derive_seed(seed, Stream::svd),
                                 cfg.svd_oversample, cfg.svd_power_iters);
    return out;
}

SeedRun run_seed(const EdgeList& data, const ExperimentConfig& cfg, std::uint64_t seed) {
    const PreparedSplit prep = prepare_split(data, cfg, seed);
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    const TrainResult trained = train(prep.train_graph, prep.features.data, tc);
    const NormalizedAdjacency na = normalize(prep.train_graph);
    const auto preds =
        predict_edges(na, prep.features.data, trained.params, eval_diffusion_config(tc), prep.split.test);
    SeedRun run;
    run.seed = seed;
    run.metrics = evaluate_predictions(preds);
    run.final_loss = trained.loss_history.empty() ? 0.0 : trained.loss_history.back();
    return run;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd r;
    r.count = values.size();
    if (values.empty()) return r;
    double sum = 0.0;
    for (double v : values) sum += v;
    r.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.mean) * (v - r.mean);
        r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return r;
}

void summarize(ExperimentResult& r) {
    std::vector<double> aucs;
    std::vector<double> f1s;
    for (const auto& run : r.runs) {
        if (run.metrics.auc) aucs.push_back(*run.metrics.auc);
        f1s.push_back(run.metrics.f1_macro);
    }
    r.auc = mean_std(aucs);
    r.f1_macro = mean_std(f1s);
}

ExperimentResult run_experiment(const std::string& dataset, const EdgeList& data,
                                const ExperimentConfig& cfg, int n_seeds, std::uint64_t base_seed,
                                const SeedCallback& on_seed) {
    if (n_seeds < 1) throw ArgumentError("run_experiment: need at least one seed");
    cfg.validate();
    ExperimentResult r;
    r.dataset = dataset;
    for (int i = 0; i < n_seeds; ++i) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
        try {
            r.runs.push_back(run_seed(data, cfg, seed));
        } catch (const std::exception& e) {
            r.aborted = true;
            r.error = "seed " + std::to_string(seed) + ": " + e.what();
            break;
        }
        if (on_seed) on_seed(r.runs.back());
    }
    summarize(r);
    return r;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void write_experiment_csv(std::ostream& out, const ExperimentResult& r) {
    out << "dataset,seed,auc,f1_macro\n";
    for (const auto& run : r.runs) {
        out << r.dataset << ',' << run.seed << ','
            << (run.metrics.auc ? fmt_double(*run.metrics.auc) : "NA") << ','
            << fmt_double(run.metrics.f1_macro) << '\n';
    }
    out << r.dataset << ",mean," << fmt_double(r.auc.mean) << ',' << fmt_double(r.f1_macro.mean)
        << '\n';
    out << r.dataset << ",std," << fmt_double(r.auc.std) << ',' << fmt_double(r.f1_macro.std)
        << '\n';
}

std::string format_experiment_table(std::span<const ExperimentResult> results) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-16s %-16s %s\n", "dataset", "AUC", "F1-macro", "seeds");
    out += line;
    for (const auto& r : results) {
        char auc[64];
        char f1[64];
        std::snprintf(auc, sizeof auc, "%.3f±%.3f", r.auc.mean, r.auc.std);
        std::snprintf(f1, sizeof f1, "%.3f±%.3f", r.f1_macro.mean, r.f1_macro.std);
        std::snprintf(line, sizeof line, "%-16s %-17s %-17s %zu%s\n", r.dataset.c_str(), auc, f1,
                      r.runs.size(), r.aborted ? " (aborted)" : "");
        out += line;
    }
    return out;
}

}  // namespace sgdnet
