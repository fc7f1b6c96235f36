#include "sgdnet/errors.hpp"
#include "sgdnet/random.hpp"
#include "sgdnet/synthetic.hpp"
#include "sgdnet/training.hpp"

#include <algorithm>

namespace sgdnet {

GradCheckReport grad_check(const GradCheckConfig& cfg, std::uint64_t seed,
                           const DiffusionAdjoint& adjoint) {
    if (cfg.nodes < 2 || cfg.nodes > 10) throw ArgumentError("grad_check: toy scale means 2 <= n <= 10");
    Rng rng(derive_seed(seed, Stream::graph));
    const SignedDigraph g(random_signed_edges(cfg.nodes, cfg.edges, 0.4, rng), cfg.nodes);
    const NormalizedAdjacency na = normalize(g);
    const EdgeBatch batch = EdgeBatch::from_edges(g.edges());
    const Matrix x = uniform_matrix(cfg.nodes, cfg.input_dim, -1.0, 1.0, rng);
    ModelParams params = init_params(cfg.input_dim, cfg.dim, cfg.layers, derive_seed(seed, Stream::init));
    // Larger-than-default weights keep every tanh off its linear regime.
    params.for_each([&rng](const std::string&, Matrix& m) {
        m = uniform_matrix(m.rows(), m.cols(), -1.0, 1.0, rng);
    });
    const DiffusionConfig dcfg{cfg.c, cfg.k_steps, M0Mode::zero, 0};

    const Gradients analytic =
        loss_and_gradients(na, x, params, dcfg, batch, cfg.lambda, adjoint).grads;
    const auto loss_at = [&](const ModelParams& p) {
        const ForwardResult f = model_forward(na, x, p, dcfg);
        return loss_total(edge_logits(f.h_final, batch, p.w_head), batch.labels, p, cfg.lambda);
    };

    GradCheckReport report;
    std::vector<std::string> names;
    params.for_each([&names](const std::string& name, const Matrix&) { names.push_back(name); });
    auto param_mats = params.matrices();
    const auto grad_mats = analytic.matrices();
    for (std::size_t i = 0; i < param_mats.size(); ++i) {
        Matrix& w = *param_mats[i];
        Matrix numeric(w.rows(), w.cols());
        for (Eigen::Index j = 0; j < w.size(); ++j) {
            const double orig = w.data()[j];
            w.data()[j] = orig + cfg.step;
            const double up = loss_at(params);
            w.data()[j] = orig - cfg.step;
            const double down = loss_at(params);
            w.data()[j] = orig;
            numeric.data()[j] = (up - down) / (2.0 * cfg.step);
        }
        const Matrix& a = *grad_mats[i];
        const double scale =
            std::max({a.cwiseAbs().maxCoeff(), numeric.cwiseAbs().maxCoeff(), 1e-300});
        const double err = (a - numeric).cwiseAbs().maxCoeff() / scale;
        report.entries.push_back({names[i], err});
        report.worst = std::max(report.worst, err);
    }
    report.passed = report.worst < cfg.tolerance;
    return report;
}

}  // namespace sgdnet
