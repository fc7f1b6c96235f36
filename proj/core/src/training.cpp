#include "sgdnet/training.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/random.hpp"

#include <cmath>
#include <string>

namespace sgdnet {

Gradients backward(const NormalizedAdjacency& na, const Matrix& x, const ModelParams& params,
                   const ForwardResult& forward, const EdgeBatch& batch, const Matrix& grad_logits,
                   double lambda, const DiffusionAdjoint& adjoint) {
    const Eigen::Index d = params.hidden_dim();
    if (static_cast<int>(forward.layers.size()) != params.num_layers() ||
        grad_logits.rows() != static_cast<Eigen::Index>(batch.size()) || grad_logits.cols() != 2 ||
        forward.h_final.cols() != d) {
        throw InternalError("backward: caches do not match parameters");
    }
    Gradients g = params.zeros_like();

    // Head: logits_i = h_u·W_top + h_v·W_bottom.
    Matrix dh = Matrix::Zero(forward.h_final.rows(), d);
    const auto top = params.w_head.topRows(d);
    const auto bottom = params.w_head.bottomRows(d);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto [u, v] = batch.pairs[i];
        const auto dl = grad_logits.row(static_cast<Eigen::Index>(i));
        g.w_head.topRows(d).noalias() += forward.h_final.row(u).transpose() * dl;
        g.w_head.bottomRows(d).noalias() += forward.h_final.row(v).transpose() * dl;
        dh.row(u).noalias() += dl * top.transpose();
        dh.row(v).noalias() += dl * bottom.transpose();
    }

    for (int l = params.num_layers() - 1; l >= 0; --l) {
        const LayerCache& cache = forward.layers[static_cast<std::size_t>(l)];
        const LayerParams& lp = params.layers[static_cast<std::size_t>(l)];
        LayerParams& lg = g.layers[static_cast<std::size_t>(l)];

        const Matrix da =
            (dh.array() * (1.0 - cache.h_next.array().square())).matrix();  // through tanh
        lg.w_n.noalias() = cache.pm.transpose() * da;
        const Matrix dpm = da * lp.w_n.transpose();
        const Matrix dh_tilde = adjoint(na, dpm.leftCols(d), dpm.rightCols(d), cache.diffusion);
        lg.w_t.noalias() = cache.h_prev.transpose() * dh_tilde;
        dh = da;  // skip connection
        dh.noalias() += dh_tilde * lp.w_t.transpose();
    }
    g.w_in.noalias() = x.transpose() * dh;

    if (lambda != 0.0) {
        auto gm = g.matrices();
        const auto pm = params.matrices();
        for (std::size_t i = 0; i < gm.size(); ++i) *gm[i] += 2.0 * lambda * *pm[i];
    }
    if (!g.all_finite()) throw NumericError("backward: non-finite gradients");
    return g;
}

LossAndGradients loss_and_gradients(const NormalizedAdjacency& na, const Matrix& x,
                                    const ModelParams& params, const DiffusionConfig& cfg,
                                    const EdgeBatch& batch, double lambda,
                                    const DiffusionAdjoint& adjoint) {
    const ForwardResult fwd = model_forward(na, x, params, cfg);
    const Matrix logits = edge_logits(fwd.h_final, batch, params.w_head);
    const CrossEntropy ce = softmax_cross_entropy(logits, batch.labels);
    LossAndGradients out;
    out.data_loss = ce.loss;
    out.loss = ce.loss + lambda * squared_norm(params);
    out.grads = backward(na, x, params, fwd, batch, ce.grad_logits, lambda, adjoint);
    return out;
}

AdamState AdamState::for_params(const ModelParams& params) {
    return {params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& cfg) {
    if (state.step == 0 && state.first_moment.layers.size() != params.layers.size()) {
        state = AdamState::for_params(params);
    }
    auto p = params.matrices();
    const auto g = grads.matrices();
    auto m = state.first_moment.matrices();
    auto v = state.second_moment.matrices();
    if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
        throw ArgumentError("adam_step: parameter/gradient/state layout mismatch");
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (g[i]->rows() != p[i]->rows() || g[i]->cols() != p[i]->cols()) {
            throw ArgumentError("adam_step: gradient shape mismatch");
        }
        m[i]->array() = cfg.beta1 * m[i]->array() + (1.0 - cfg.beta1) * g[i]->array();
        v[i]->array() = cfg.beta2 * v[i]->array() + (1.0 - cfg.beta2) * g[i]->array().square();
        p[i]->array() -=
            cfg.lr * (m[i]->array() / bc1) / ((v[i]->array() / bc2).sqrt() + cfg.eps);
    }
}

void TrainConfig::validate() const {
    if (dim < 1 || layers < 1) throw ArgumentError("train: dim and layers must be >= 1");
    if (!(c > 0.0 && c < 1.0)) throw ArgumentError("train: c must lie in (0, 1)");
    if (k_steps < 1) throw ArgumentError("train: K must be >= 1");
    if (epochs < 0) throw ArgumentError("train: epochs must be >= 0");
    if (!(adam.lr >= 0.0) || !(weight_decay >= 0.0)) {
        throw ArgumentError("train: lr and weight decay must be >= 0");
    }
}

DiffusionConfig TrainConfig::diffusion(int epoch) const {
    return {c, k_steps, m0_mode, derive_seed(seed, Stream::m0, static_cast<std::uint64_t>(epoch))};
}

ModelParams initial_params(Eigen::Index input_dim, const TrainConfig& cfg) {
    return init_params(static_cast<int>(input_dim), cfg.dim, cfg.layers,
                       derive_seed(cfg.seed, Stream::init));
}

TrainResult train(const SignedDigraph& train_graph, const Matrix& x, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    cfg.validate();
    if (x.rows() != static_cast<Eigen::Index>(train_graph.num_nodes())) {
        throw ArgumentError("train: feature rows do not match node count");
    }
    const NormalizedAdjacency na = normalize(train_graph);
    const EdgeBatch batch = EdgeBatch::from_edges(train_graph.edges());

    TrainResult out;
    out.params = initial_params(x.cols(), cfg);
    AdamState state = AdamState::for_params(out.params);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        LossAndGradients lg;
        try {
            lg = loss_and_gradients(na, x, out.params, cfg.diffusion(epoch), batch,
                                    cfg.weight_decay);
        } catch (const NumericError& e) {
            throw TrainingAborted(std::string("epoch ") + std::to_string(epoch) + ": " + e.what(),
                                  epoch, out.params);
        }
        if (!std::isfinite(lg.loss)) {
            throw TrainingAborted("epoch " + std::to_string(epoch) + ": non-finite loss", epoch,
                                  out.params);
        }
        out.loss_history.push_back(lg.loss);
        if (on_epoch) on_epoch(epoch, lg.loss);
        adam_step(out.params, lg.grads, state, cfg.adam);
    }
    return out;
}

}  // namespace sgdnet
