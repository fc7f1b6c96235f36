#include "oracles.hpp"

#include "sgdnet/diffusion.hpp"
#include "sgdnet/errors.hpp"
#include "sgdnet/parallel.hpp"
#include "sgdnet/random.hpp"
#include "sgdnet/synthetic.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace sgdnet {
namespace {

NormalizedAdjacency single_edge(Sign s) { return normalize(SignedDigraph({{0, 1, s}}, 2)); }

Matrix col(std::initializer_list<double> v) {
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

DiffusionConfig cfg_zero(double c, int k) { return {c, k, M0Mode::zero, 0}; }

struct RandomCase {
    std::vector<SignedEdge> edges;
    NodeId n;
    NormalizedAdjacency na;
    Matrix h;
};

RandomCase random_case(Rng& rng, NodeId max_n, Eigen::Index d) {
    RandomCase rc;
    rc.n = 2 + static_cast<NodeId>(rng() % (max_n - 1));
    rc.edges = random_signed_edges(rc.n, rng() % (2 * rc.n + 1), 0.4, rng, true);
    rc.na = normalize(SignedDigraph(rc.edges, rc.n));
    rc.h = uniform_matrix(rc.n, d, -1, 1, rng);
    return rc;
}

TEST(Diffuse, PositiveEdgeCarriesFeatureIntoTargetP) {
    const auto na = single_edge(Sign::positive);
    const auto t1 = diffuse(na, col({1, 0}), cfg_zero(0.5, 1));
    EXPECT_EQ(t1.p, col({0.5, 0.5}));
    EXPECT_EQ(t1.m, col({0, 0}));
    const auto t2 = diffuse(na, col({1, 0}), cfg_zero(0.5, 2));
    EXPECT_EQ(t2.p, col({0.5, 0.25}));
    EXPECT_EQ(t2.m, col({0, 0}));
}

TEST(Diffuse, NegativeEdgeFlipsSurferSign) {
    const auto t1 = diffuse(single_edge(Sign::negative), col({1, 0}), cfg_zero(0.5, 1));
    EXPECT_EQ(t1.p, col({0.5, 0}));
    EXPECT_EQ(t1.m, col({0, 0.5}));
}

TEST(Diffuse, ZeroIsAFixedPoint) {
    Rng rng(1);
    const auto rc = random_case(rng, 30, 3);
    for (int k : {1, 5, 20}) {
        const auto t = diffuse(rc.na, Matrix::Zero(rc.n, 3), cfg_zero(0.3, k));
        EXPECT_EQ(t.p, Matrix::Zero(rc.n, 3));
        EXPECT_EQ(t.m, Matrix::Zero(rc.n, 3));
    }
}

TEST(Diffuse, NegativeChannelDecaysOnPositiveOnlyGraph) {
    Rng rng(2);
    const NodeId n = 25;
    const auto edges = random_signed_edges(n, 60, 0.0, rng);
    const auto na = normalize(SignedDigraph(edges, n));
    const Matrix h = uniform_matrix(n, 2, -1, 1, rng);
    const Matrix m0 = uniform_matrix(n, 2, -1, 1, rng);
    const double base = norm_l1(m0);
    const double c = 0.3;
    diffuse_from(na, h, {h, m0}, c, 15, [&](int k, const DiffusionState& t) {
        EXPECT_LE(norm_l1(t.m), std::pow(1 - c, k) * base * (1 + 1e-12)) << "k=" << k;
    });
}

TEST(Diffuse, MatchesDenseRecurrenceBuiltFromEdges) {
    Rng rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const auto rc = random_case(rng, 40, 3);
        const Matrix b = oracle::block_operator_from_edges(rc.edges, rc.n);
        const DiffusionConfig cfg{0.15 + 0.7 * uniform(rng, 0, 1), 1 + static_cast<int>(rng() % 12),
                                  M0Mode::uniform, rng()};
        const DiffusionState t0 = initial_state(rc.h, cfg);
        const Matrix want = oracle::dense_recurrence(b, rc.h, t0.stacked(), cfg.c, cfg.k_steps);
        const Matrix got = diffuse(rc.na, rc.h, cfg).stacked();
        EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Diffuse, LinearInHWithZeroM0) {
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rc = random_case(rng, 50, 4);
        const Matrix h2 = uniform_matrix(rc.n, 4, -1, 1, rng);
        const double a = uniform(rng, -2, 2);
        const double b = uniform(rng, -2, 2);
        const auto cfg = cfg_zero(0.4, 7);
        const auto lhs = diffuse(rc.na, a * rc.h + b * h2, cfg);
        const auto r1 = diffuse(rc.na, rc.h, cfg);
        const auto r2 = diffuse(rc.na, h2, cfg);
        EXPECT_LT((lhs.p - (a * r1.p + b * r2.p)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((lhs.m - (a * r1.m + b * r2.m)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Diffuse, UniformM0IsSeededAndBounded) {
    const Matrix h = Matrix::Ones(10, 3);
    const DiffusionConfig cfg{0.5, 1, M0Mode::uniform, 99};
    const auto a = initial_state(h, cfg);
    const auto b = initial_state(h, cfg);
    EXPECT_EQ(a.m, b.m);
    EXPECT_LE(a.m.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_GT(a.m.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(a.p, h);
}

TEST(Diffuse, ValidatesInputs) {
    const auto na = single_edge(Sign::positive);
    EXPECT_THROW(diffuse(na, Matrix::Zero(3, 1), cfg_zero(0.5, 1)), ArgumentError);
    EXPECT_THROW(diffuse(na, col({1, 0}), cfg_zero(1.0, 1)), ArgumentError);
    EXPECT_THROW(diffuse(na, col({1, 0}), cfg_zero(0.0, 1)), ArgumentError);
    EXPECT_THROW(diffuse(na, col({1, 0}), cfg_zero(0.5, 0)), ArgumentError);
    EXPECT_THROW(diffuse(na, col({std::numeric_limits<double>::quiet_NaN(), 0}), cfg_zero(0.5, 1)),
                 NumericError);
}

TEST(Diffuse, ThreadCountDoesNotChangeResults) {
    Rng rng(5);
    const NodeId n = 4000;
    const auto na = normalize(SignedDigraph(random_signed_edges(n, 30000, 0.3, rng), n));
    const Matrix h = uniform_matrix(n, 8, -1, 1, rng);
    const DiffusionConfig cfg{0.35, 10, M0Mode::uniform, 3};
    set_num_threads(1);
    const auto a = diffuse(na, h, cfg);
    set_num_threads(3);
    const auto b = diffuse(na, h, cfg);
    set_num_threads(1);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.m, b.m);
}

TEST(ExactSolve, SingleEdgeFixedPoints) {
    const auto pos = exact_solve(single_edge(Sign::positive), col({1, 0}), 0.5);
    EXPECT_NEAR(pos.p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(pos.p(1, 0), 0.25, 1e-15);
    EXPECT_NEAR(pos.m.cwiseAbs().maxCoeff(), 0.0, 1e-15);
    const auto neg = exact_solve(single_edge(Sign::negative), col({1, 0}), 0.5);
    EXPECT_NEAR(neg.p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(neg.p(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(neg.m(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(neg.m(1, 0), 0.25, 1e-15);
}

TEST(ExactSolve, EmptyGraphGivesInjectedFeatures) {
    Rng rng(6);
    const Matrix h = uniform_matrix(4, 2, -1, 1, rng);
    const auto t = exact_solve(normalize(SignedDigraph({}, 4)), h, 0.3);
    EXPECT_LT((t.p - 0.3 * h).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(t.m, Matrix::Zero(4, 2));
}

TEST(ExactSolve, IsAFixedPointOfOneStep) {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rc = random_case(rng, 60, 2);
        const auto star = exact_solve(rc.na, rc.h, 0.35);
        const auto next = diffuse_from(rc.na, rc.h, star, 0.35, 1);
        EXPECT_LT(distance_l1(star, next), 1e-12);
    }
}

TEST(ExactSolve, SizeGuard) {
    EXPECT_THROW(exact_solve(normalize(SignedDigraph({}, 2049)), Matrix::Zero(2049, 1), 0.5),
                 ArgumentError);
}

TEST(Convergence, ErrorWithinTheoreticalBound) {
    Rng rng(8);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 10; ++trial) {
        const auto rc = random_case(rng, 100, 3);
        for (double c : {0.15, 0.5, 0.85}) {
            const auto star = exact_solve(rc.na, rc.h, c);
            const DiffusionConfig cfg{c, 20, M0Mode::uniform, rng()};
            const auto t0 = initial_state(rc.h, cfg);
            const double slack = 64 * eps * (norm_l1(star.stacked()) + norm_l1(t0.stacked()));
            diffuse_from(rc.na, rc.h, t0, c, 20, [&](int k, const DiffusionState& t) {
                EXPECT_LE(distance_l1(star, t), error_bound(t0, star, c, k) + slack)
                    << "c=" << c << " k=" << k;
            });
        }
    }
}

TEST(Convergence, StartingPointIndependence) {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rc = random_case(rng, 80, 2);
        const double c = 0.35;
        const DiffusionState a0 = initial_state(rc.h, cfg_zero(c, 1));
        const DiffusionState b0 = initial_state(rc.h, {c, 1, M0Mode::uniform, rng()});
        const double d0 = distance_l1(a0, b0);
        for (int k = 1; k <= 15; ++k) {
            const auto a = diffuse_from(rc.na, rc.h, a0, c, k);
            const auto b = diffuse_from(rc.na, rc.h, b0, c, k);
            EXPECT_LE(distance_l1(a, b), std::pow(1 - c, k) * d0 * (1 + 1e-12) + 1e-15);
        }
    }
}

TEST(ErrorBound, KnownValues) {
    const auto na = single_edge(Sign::positive);
    const Matrix h = col({1, 0});
    const auto star = exact_solve(na, h, 0.5);
    const auto t0 = initial_state(h, cfg_zero(0.5, 1));
    const double dist = distance_l1(star, t0);
    // T* − T⁰ = [0.5−1, 0.25, 0, 0] → column sum 0.75.
    EXPECT_NEAR(dist, 0.75, 1e-15);
    EXPECT_DOUBLE_EQ(error_bound(t0, star, 0.5, 0), dist);
    EXPECT_DOUBLE_EQ(error_bound(t0, star, 0.5, 10), std::pow(0.5, 10) * dist);
    EXPECT_LT(error_bound(t0, star, 1.0 - 1e-9, 1), 1e-8);
}

double inner(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

TEST(DiffuseAdjoint, DotProductTest) {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rc = random_case(rng, 60, 3);
        const DiffusionConfig cfg = cfg_zero(0.1 + 0.8 * uniform(rng, 0, 1), 1 + static_cast<int>(rng() % 10));
        const Matrix yp = uniform_matrix(rc.n, 3, -1, 1, rng);
        const Matrix ym = uniform_matrix(rc.n, 3, -1, 1, rng);
        const auto fwd = diffuse(rc.na, rc.h, cfg);
        const double lhs = inner(fwd.p, yp) + inner(fwd.m, ym);
        const double rhs = inner(rc.h, diffuse_adjoint(rc.na, yp, ym, cfg));
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(lhs), 1e-300)) << "trial " << trial;
    }
}

TEST(DiffuseAdjoint, EmptyGraphSingleStep) {
    Rng rng(11);
    const Matrix gp = uniform_matrix(3, 2, -1, 1, rng);
    const Matrix gm = uniform_matrix(3, 2, -1, 1, rng);
    const auto g = diffuse_adjoint(normalize(SignedDigraph({}, 3)), gp, gm, cfg_zero(0.4, 1));
    EXPECT_LT((g - 0.4 * gp).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(DiffuseAdjoint, MatchesCentralFiniteDifferences) {
    Rng rng(12);
    const NodeId n = 5;
    const auto edges = random_signed_edges(n, 12, 0.4, rng);
    const auto na = normalize(SignedDigraph(edges, n));
    const Matrix h = uniform_matrix(n, 3, -1, 1, rng);
    const Matrix gp = uniform_matrix(n, 3, -1, 1, rng);
    const Matrix gm = uniform_matrix(n, 3, -1, 1, rng);
    const auto cfg = cfg_zero(0.45, 4);
    const auto objective = [&](const Matrix& x) {
        const auto t = diffuse(na, x, cfg);
        return inner(t.p, gp) + inner(t.m, gm);
    };
    const Matrix analytic = diffuse_adjoint(na, gp, gm, cfg);
    const double step = 1e-6;
    Matrix numeric(n, 3);
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        Matrix up = h;
        Matrix down = h;
        up.data()[i] += step;
        down.data()[i] -= step;
        numeric.data()[i] = (objective(up) - objective(down)) / (2 * step);
    }
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        const double a = analytic.data()[i];
        const double f = numeric.data()[i];
        EXPECT_LT(std::abs(a - f), 1e-6 * std::max({std::abs(a), std::abs(f), 1e-3}));
    }
}

TEST(DiffuseAdjoint, ValidatesShapes) {
    const auto na = single_edge(Sign::positive);
    EXPECT_THROW(diffuse_adjoint(na, Matrix::Zero(3, 1), Matrix::Zero(3, 1), cfg_zero(0.5, 1)),
                 ArgumentError);
    EXPECT_THROW(diffuse_adjoint(na, Matrix::Zero(2, 1), Matrix::Zero(2, 2), cfg_zero(0.5, 1)),
                 ArgumentError);
}

}  // namespace
}  // namespace sgdnet
