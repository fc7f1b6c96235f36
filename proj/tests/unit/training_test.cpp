#include "oracles.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/features.hpp"
#include "sgdnet/metrics.hpp"
#include "sgdnet/random.hpp"
#include "sgdnet/synthetic.hpp"
#include "sgdnet/training.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace sgdnet {
namespace {

struct Toy {
    NormalizedAdjacency na;
    Matrix x;
    ModelParams params;
    EdgeBatch batch;
};

Toy make_toy(std::uint64_t seed) {
    Rng rng(seed);
    const NodeId n = 6;
    const auto edges = random_signed_edges(n, 12, 0.4, rng);
    Toy t;
    t.na = normalize(SignedDigraph(edges, n));
    t.x = uniform_matrix(n, 4, -1, 1, rng);
    t.params = init_params(4, 3, 2, rng());
    for (Matrix* m : t.params.matrices()) *m = uniform_matrix(m->rows(), m->cols(), -1, 1, rng);
    t.batch = EdgeBatch::from_edges(edges);
    return t;
}

TEST(Backward, MatchesFiniteDifferencesOnEveryEntry) {
    const Toy t = make_toy(1);
    const DiffusionConfig cfg{0.5, 3, M0Mode::zero, 0};
    const double lambda = 0.001;
    const auto lg = loss_and_gradients(t.na, t.x, t.params, cfg, t.batch, lambda);
    const auto objective = [&](const ModelParams& p) {
        const auto fwd = model_forward(t.na, t.x, p, cfg);
        return loss_total(edge_logits(fwd.h_final, t.batch, p.w_head), t.batch.labels, p, lambda);
    };
    EXPECT_NEAR(lg.loss, objective(t.params), 1e-14);

    ModelParams probe = t.params;
    const auto probe_m = probe.matrices();
    const auto grad_m = lg.grads.matrices();
    const double h = 1e-6;
    for (std::size_t k = 0; k < probe_m.size(); ++k) {
        for (Eigen::Index i = 0; i < probe_m[k]->size(); ++i) {
            double& w = probe_m[k]->data()[i];
            const double saved = w;
            w = saved + h;
            const double up = objective(probe);
            w = saved - h;
            const double down = objective(probe);
            w = saved;
            const double numeric = (up - down) / (2 * h);
            const double analytic = grad_m[k]->data()[i];
            EXPECT_LT(std::abs(analytic - numeric), 1e-5 * std::max({1.0, std::abs(numeric)}))
                << "matrix " << k << " entry " << i;
        }
    }
}

TEST(Backward, WeightDecayOnlyGradientWhenDataLossVanishes) {
    const Toy t = make_toy(2);
    const DiffusionConfig cfg{0.5, 3, M0Mode::zero, 0};
    const auto fwd = model_forward(t.na, t.x, t.params, cfg);
    const Matrix zero = Matrix::Zero(static_cast<Eigen::Index>(t.batch.size()), 2);
    const auto g = backward(t.na, t.x, t.params, fwd, t.batch, zero, 0.01);
    const auto gm = g.matrices();
    const auto pm = t.params.matrices();
    for (std::size_t k = 0; k < gm.size(); ++k) {
        EXPECT_LT((*gm[k] - 0.02 * *pm[k]).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(CrossEntropyGradient, ShrinksAsMarginGrows) {
    double previous = std::numeric_limits<double>::infinity();
    for (double margin = 0.0; margin <= 40.0; margin += 2.0) {
        Matrix logits(1, 2);
        logits << margin / 2, -margin / 2;
        const auto ce = softmax_cross_entropy(logits, std::vector<Sign>{Sign::positive});
        const double g = ce.grad_logits.cwiseAbs().maxCoeff();
        EXPECT_LT(g, previous);
        previous = g;
    }
    EXPECT_LT(previous, 1e-16);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
    auto p = init_params(3, 2, 1, 4);
    const auto before = p;
    auto state = AdamState::for_params(p);
    for (int i = 0; i < 3; ++i) adam_step(p, p.zeros_like(), state, {});
    const auto a = before.matrices();
    const auto b = p.matrices();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(*a[k], *b[k]);
    EXPECT_EQ(state.step, 3);
}

TEST(Adam, FirstStepMovesByLearningRate) {
    auto p = init_params(3, 2, 1, 5);
    const auto before = p;
    Rng rng(6);
    auto g = p.zeros_like();
    for (Matrix* m : g.matrices()) *m = uniform_matrix(m->rows(), m->cols(), 0.5, 2.0, rng);
    auto state = AdamState::for_params(p);
    adam_step(p, g, state, {});
    const auto a = before.matrices();
    const auto b = p.matrices();
    const auto gm = g.matrices();
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (Eigen::Index i = 0; i < a[k]->size(); ++i) {
            const double gi = gm[k]->data()[i];
            EXPECT_NEAR(a[k]->data()[i] - b[k]->data()[i], 0.01 * gi / (gi + 1e-8), 1e-15);
        }
    }
}

TEST(Adam, LayoutMismatchThrows) {
    auto p = init_params(3, 2, 1, 0);
    auto state = AdamState::for_params(p);
    const auto other = init_params(3, 2, 2, 0);
    EXPECT_THROW(adam_step(p, other, state, {}), ArgumentError);
}

TEST(GradCheck, PassesAcrossSeeds) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = grad_check({}, seed);
        EXPECT_TRUE(r.passed) << "seed " << seed << " worst " << r.worst;
        EXPECT_LT(r.worst, 1e-4);
        EXPECT_EQ(r.entries.size(), 6u);
    }
}

TEST(GradCheck, PassesWithAndWithoutWeightDecay) {
    for (double lambda : {0.0, 0.01}) {
        GradCheckConfig cfg;
        cfg.lambda = lambda;
        EXPECT_TRUE(grad_check(cfg, 11).passed) << "lambda " << lambda;
    }
}

TEST(GradCheck, DetectsBrokenAdjoint) {
    const DiffusionAdjoint flipped = [](const NormalizedAdjacency& na, const Matrix& gp,
                                        const Matrix& gm, const DiffusionConfig& cfg) {
        return diffuse_adjoint(na, gp, Matrix(-gm), cfg);
    };
    const auto r = grad_check({}, 3, flipped);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.worst, 1e-1);
}

TEST(GradCheck, RejectsLargeGraphs) {
    GradCheckConfig cfg;
    cfg.nodes = 11;
    EXPECT_THROW(grad_check(cfg, 0), ArgumentError);
}

struct Planted {
    SignedDigraph graph;
    Matrix x;
};

// Two camps of 20, two out-edges per node, 30% of them across camps.
Planted planted(std::uint64_t seed) {
    Rng rng(derive_seed(seed, Stream::graph));
    const NodeId n = 40;
    auto edges = planted_partition_edges(n, 2, 0.3, rng);
    Planted p{SignedDigraph(std::move(edges), n), {}};
    p.x = init_features(p.graph, static_cast<int>(n), derive_seed(seed, Stream::svd)).data;
    return p;
}

TrainConfig small_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    return cfg;
}

double training_f1(const Planted& p, const TrainConfig& cfg, const ModelParams& params) {
    const auto na = normalize(p.graph);
    const auto batch = EdgeBatch::from_edges(p.graph.edges());
    const auto fwd = model_forward(na, p.x, params, cfg.diffusion(cfg.epochs));
    const Vector prob = positive_probability(edge_logits(fwd.h_final, batch, params.w_head));
    const std::vector<double> scores(prob.data(), prob.data() + prob.size());
    return evaluate(scores, batch.labels).f1_macro;
}

TEST(Train, LearnsPlantedPartition) {
    const auto p = planted(7);
    ASSERT_TRUE(oracle::additively_separable(p.graph.edges(), p.graph.num_nodes()));
    const auto cfg = small_config(7);
    const auto result = train(p.graph, p.x, cfg);
    ASSERT_EQ(result.loss_history.size(), 100u);
    EXPECT_LT(result.loss_history.back(), result.loss_history.front());
    EXPECT_GE(training_f1(p, cfg, result.params), 0.95);
}

// The score margin is f(u) + g(v), so a positive pair (a1→a2, b2→b1) and a negative pair
// (a1→b1, b2→a2) share the same total margin and cannot all be classified correctly.
TEST(Train, AdditiveHeadCannotSeparateAlternatingFourCycle) {
    const std::vector<SignedEdge> edges{{0, 1, Sign::positive},
                                        {0, 2, Sign::negative},
                                        {3, 2, Sign::positive},
                                        {3, 1, Sign::negative}};
    ASSERT_FALSE(oracle::additively_separable(edges, 4));
    Planted p{SignedDigraph(edges, 4), {}};
    p.x = init_features(p.graph, 4, 1).data;
    auto cfg = small_config(1);
    cfg.epochs = 400;
    cfg.weight_decay = 0.0;
    cfg.m0_mode = M0Mode::zero;
    const auto result = train(p.graph, p.x, cfg);
    EXPECT_LT(training_f1(p, cfg, result.params), 1.0);
    for (double loss : result.loss_history) EXPECT_GE(loss, std::log(2.0) - 1e-12);
}

// Net decrease only; the epoch-to-epoch trace is reported by synthetic_acceptance.
TEST(Train, LossFallsAfterWarmupWithFixedM0) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = planted(seed);
        auto cfg = small_config(seed);
        cfg.m0_mode = M0Mode::zero;
        const auto losses = train(p.graph, p.x, cfg).loss_history;
        EXPECT_LT(losses.back(), losses[10]) << "seed " << seed;
        EXPECT_LT(*std::max_element(losses.begin() + 10, losses.end()), losses[10] * (1 + 1e-12))
            << "seed " << seed;
    }
}

TEST(Train, ZeroLearningRateKeepsInitialParameters) {
    const auto p = planted(8);
    auto cfg = small_config(8);
    cfg.epochs = 5;
    cfg.adam.lr = 0.0;
    cfg.m0_mode = M0Mode::zero;
    const auto result = train(p.graph, p.x, cfg);
    const auto init = initial_params(p.x.cols(), cfg);
    const auto a = init.matrices();
    const auto b = result.params.matrices();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(*a[k], *b[k]);
    for (double l : result.loss_history) EXPECT_EQ(l, result.loss_history.front());
}

TEST(Train, ZeroEpochsReturnsInitialisation) {
    const auto p = planted(9);
    auto cfg = small_config(9);
    cfg.epochs = 0;
    const auto result = train(p.graph, p.x, cfg);
    EXPECT_TRUE(result.loss_history.empty());
    EXPECT_EQ(result.params.w_in, initial_params(p.x.cols(), cfg).w_in);
}

TEST(Train, DeterministicForSeed) {
    const auto p = planted(10);
    auto cfg = small_config(10);
    cfg.epochs = 10;
    const auto a = train(p.graph, p.x, cfg);
    const auto b = train(p.graph, p.x, cfg);
    EXPECT_EQ(a.loss_history, b.loss_history);
    EXPECT_EQ(a.params.w_head, b.params.w_head);
}

TEST(Train, CallbackSeesEveryEpoch) {
    const auto p = planted(11);
    auto cfg = small_config(11);
    cfg.epochs = 4;
    std::vector<int> seen;
    const auto r = train(p.graph, p.x, cfg, [&](int e, double) { seen.push_back(e); });
    EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Train, ValidatesConfig) {
    const auto p = planted(12);
    auto cfg = small_config(12);
    cfg.c = 1.5;
    EXPECT_THROW(train(p.graph, p.x, cfg), ArgumentError);
    cfg = small_config(12);
    cfg.epochs = -1;
    EXPECT_THROW(train(p.graph, p.x, cfg), ArgumentError);
    EXPECT_THROW(train(p.graph, Matrix::Zero(3, 16), small_config(12)), ArgumentError);
}

TEST(Train, DivergenceAbortsWithLastGoodParameters) {
    const auto p = planted(13);
    auto cfg = small_config(13);
    cfg.epochs = 3;
    Matrix bad = p.x;
    bad(0, 0) = std::numeric_limits<double>::infinity();
    try {
        train(p.graph, bad, cfg);
        FAIL() << "expected TrainingAborted";
    } catch (const TrainingAborted& e) {
        EXPECT_EQ(e.epoch(), 0);
        EXPECT_TRUE(e.last_good().all_finite());
    }
}

}  // namespace
}  // namespace sgdnet
