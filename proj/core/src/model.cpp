#include "sgdnet/model.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/random.hpp"

#include <cmath>
#include <string>

namespace sgdnet {

namespace {

template <typename Params, typename Fn>
void visit_params(Params& p, const Fn& fn) {
    fn("w_in", p.w_in);
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l) + ".";
        fn(prefix + "w_t", p.layers[l].w_t);
        fn(prefix + "w_n", p.layers[l].w_n);
    }
    fn("w_head", p.w_head);
}

}  // namespace

void ModelParams::for_each(const std::function<void(const std::string&, Matrix&)>& fn) {
    visit_params(*this, fn);
}

void ModelParams::for_each(
    const std::function<void(const std::string&, const Matrix&)>& fn) const {
    visit_params(*this, fn);
}

std::vector<Matrix*> ModelParams::matrices() {
    std::vector<Matrix*> out;
    for_each([&out](const std::string&, Matrix& m) { out.push_back(&m); });
    return out;
}

std::vector<const Matrix*> ModelParams::matrices() const {
    std::vector<const Matrix*> out;
    for_each([&out](const std::string&, const Matrix& m) { out.push_back(&m); });
    return out;
}

ModelParams ModelParams::zeros_like() const {
    ModelParams z = *this;
    z.for_each([](const std::string&, Matrix& m) { m.setZero(); });
    return z;
}

bool ModelParams::all_finite() const {
    bool ok = true;
    for_each([&ok](const std::string&, const Matrix& m) { ok = ok && m.allFinite(); });
    return ok;
}

ModelParams init_params(int d0, int d, int num_layers, std::uint64_t seed) {
    if (d0 < 1 || d < 1 || num_layers < 1) {
        throw ArgumentError("init_params: dimensions and layer count must be positive");
    }
    Rng rng(seed);
    const auto draw = [&rng](Eigen::Index rows, Eigen::Index cols) {
        const double bound = std::sqrt(1.0 / static_cast<double>(rows));
        return uniform_matrix(rows, cols, -bound, bound, rng);
    };
    ModelParams p;
    p.w_in = draw(d0, d);
    for (int l = 0; l < num_layers; ++l) {
        LayerParams layer;
        layer.w_t = draw(d, d);
        layer.w_n = draw(2 * d, d);
        p.layers.push_back(std::move(layer));
    }
    p.w_head = draw(2 * d, 2);
    return p;
}

EdgeBatch EdgeBatch::from_edges(std::span<const SignedEdge> edges) {
    EdgeBatch b;
    b.pairs.reserve(edges.size());
    b.labels.reserve(edges.size());
    for (const auto& e : edges) {
        b.pairs.emplace_back(e.src, e.dst);
        b.labels.push_back(e.sign);
    }
    return b;
}

DiffusionConfig layer_diffusion_config(const DiffusionConfig& cfg, int layer) {
    DiffusionConfig out = cfg;
    out.m0_seed = splitmix64(cfg.m0_seed + static_cast<std::uint64_t>(layer));
    return out;
}

LayerOutput layer_forward(const NormalizedAdjacency& na, const Matrix& h_prev,
                          const LayerParams& params, const DiffusionConfig& cfg) {
    const Eigen::Index d = h_prev.cols();
    if (params.w_t.rows() != d || params.w_t.cols() != d || params.w_n.rows() != 2 * d ||
        params.w_n.cols() != d) {
        throw ArgumentError("layer_forward: parameter shapes do not match width " +
                            std::to_string(d));
    }
    const Matrix h_tilde = h_prev * params.w_t;
    DiffusionState t = diffuse(na, h_tilde, cfg);

    LayerOutput out;
    out.cache.h_prev = h_prev;
    out.cache.pm.resize(h_prev.rows(), 2 * d);
    out.cache.pm << t.p, t.m;
    out.cache.diffusion = cfg;
    out.h_next = (out.cache.pm * params.w_n + h_prev).array().tanh().matrix();
    if (!out.h_next.allFinite()) throw NumericError("layer_forward: non-finite activations");
    out.cache.h_next = out.h_next;
    return out;
}

ForwardResult model_forward(const NormalizedAdjacency& na, const Matrix& x,
                            const ModelParams& params, const DiffusionConfig& cfg) {
    if (x.cols() != params.input_dim()) {
        throw ArgumentError("model_forward: features have " + std::to_string(x.cols()) +
                            " columns, model expects " + std::to_string(params.input_dim()));
    }
    if (x.rows() != static_cast<Eigen::Index>(na.num_nodes())) {
        throw ArgumentError("model_forward: feature rows do not match node count");
    }
    ForwardResult out;
    Matrix h = x * params.w_in;
    for (int l = 0; l < params.num_layers(); ++l) {
        LayerOutput lo = layer_forward(na, h, params.layers[l], layer_diffusion_config(cfg, l));
        h = std::move(lo.h_next);
        out.layers.push_back(std::move(lo.cache));
    }
    out.h_final = std::move(h);
    return out;
}

Matrix edge_logits(const Matrix& h_final, const EdgeBatch& batch, const Matrix& w_head) {
    const Eigen::Index d = h_final.cols();
    if (w_head.rows() != 2 * d || w_head.cols() != 2) {
        throw ArgumentError("edge_logits: w_head must be 2d x 2");
    }
    const auto n = static_cast<NodeId>(h_final.rows());
    const auto top = w_head.topRows(d);
    const auto bottom = w_head.bottomRows(d);
    Matrix logits(static_cast<Eigen::Index>(batch.size()), 2);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto [u, v] = batch.pairs[i];
        if (u >= n || v >= n) {
            throw ArgumentError("edge_logits: node id out of range in pair " + std::to_string(i));
        }
        logits.row(static_cast<Eigen::Index>(i)) = h_final.row(u) * top + h_final.row(v) * bottom;
    }
    return logits;
}

CrossEntropy softmax_cross_entropy(const Matrix& logits, std::span<const Sign> labels) {
    if (logits.cols() != 2 || static_cast<std::size_t>(logits.rows()) != labels.size()) {
        throw ArgumentError("softmax_cross_entropy: logits must be |labels| x 2");
    }
    CrossEntropy out;
    out.grad_logits.resize(logits.rows(), 2);
    if (labels.empty()) return out;
    const double inv = 1.0 / static_cast<double>(labels.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double a = logits(i, 0);
        const double b = logits(i, 1);
        const double mx = std::max(a, b);
        const double lse = mx + std::log(std::exp(a - mx) + std::exp(b - mx));
        const Eigen::Index y = class_index(labels[static_cast<std::size_t>(i)]);
        total += lse - logits(i, y);
        out.grad_logits(i, 0) = std::exp(a - lse) * inv;
        out.grad_logits(i, 1) = std::exp(b - lse) * inv;
        out.grad_logits(i, y) -= inv;
    }
    out.loss = total * inv;
    return out;
}

double squared_norm(const ModelParams& params) {
    double s = 0.0;
    params.for_each([&s](const std::string&, const Matrix& m) { s += m.squaredNorm(); });
    return s;
}

double loss_total(const Matrix& logits, std::span<const Sign> labels, const ModelParams& params,
                  double lambda) {
    return softmax_cross_entropy(logits, labels).loss + lambda * squared_norm(params);
}

Vector positive_probability(const Matrix& logits) {
    Vector p(logits.rows());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        // softmax column 0 = 1 / (1 + exp(l1 − l0))
        p[i] = 1.0 / (1.0 + std::exp(logits(i, 1) - logits(i, 0)));
    }
    return p;
}

}  // namespace sgdnet
