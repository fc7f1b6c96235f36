#include "oracles.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/metrics.hpp"
#include "sgdnet/random.hpp"
#include "sgdnet/synthetic.hpp"

#include <gtest/gtest.h>

#include <set>

namespace sgdnet {
namespace {

constexpr Sign P = Sign::positive;
constexpr Sign N = Sign::negative;

std::vector<SignedEdge> chain(std::size_t m) {
    std::vector<SignedEdge> e;
    for (std::size_t i = 0; i < m; ++i) {
        e.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), i % 3 ? P : N});
    }
    return e;
}

TEST(Split, SizesFollowFloor) {
    const auto s = split_edges(chain(24186), 0.2, 1);
    EXPECT_EQ(s.test.size(), 4837u);
    EXPECT_EQ(s.train.size(), 19349u);
    const auto small = split_edges(chain(10), 0.2, 1);
    EXPECT_EQ(small.test.size(), 2u);
    EXPECT_EQ(small.train.size(), 8u);
}

TEST(Split, PartitionsTheEdgeSet) {
    const auto edges = chain(500);
    const auto s = split_edges(edges, 0.2, 3);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& e : s.train) seen.insert({e.src, e.dst});
    for (const auto& e : s.test) EXPECT_TRUE(seen.insert({e.src, e.dst}).second);
    EXPECT_EQ(seen.size(), edges.size());
}

TEST(Split, DeterministicPerSeed) {
    const auto edges = chain(100);
    EXPECT_EQ(split_edges(edges, 0.2, 5).test, split_edges(edges, 0.2, 5).test);
    EXPECT_NE(split_edges(edges, 0.2, 5).test, split_edges(edges, 0.2, 6).test);
}

TEST(Split, RejectsBadInput) {
    EXPECT_THROW(split_edges(chain(100), 0.0, 0), ArgumentError);
    EXPECT_THROW(split_edges(chain(100), 1.0, 0), ArgumentError);
    EXPECT_THROW(split_edges(chain(4), 0.2, 0), ArgumentError);
}

TEST(Auc, Examples) {
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.6, 0.4}, std::vector<Sign>{P, N, P}), 0.5);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, std::vector<Sign>{P, N, P, N}), 0.5);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<Sign>{P, P, N, N}), 1.0);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<Sign>{P, P, N, N}), 0.0);
}

TEST(Auc, MatchesPairCounting) {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + rng() % 60;
        std::vector<double> scores(m);
        std::vector<Sign> labels(m);
        for (std::size_t i = 0; i < m; ++i) {
            // Coarse grid so ties are common.
            scores[i] = static_cast<double>(rng() % 7) / 6.0;
            labels[i] = rng() % 3 ? P : N;
        }
        labels[0] = P;
        labels[1] = N;
        EXPECT_NEAR(auc(scores, labels), oracle::brute_force_auc(scores, labels), 1e-12);
    }
}

TEST(Auc, SingleClassIsUndefined) {
    EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<Sign>{P, P}), MetricError);
    EXPECT_THROW(auc(std::vector<double>{0.1}, std::vector<Sign>{N}), MetricError);
    EXPECT_THROW(auc(std::vector<double>{0.1}, std::vector<Sign>{N, P}), ArgumentError);
}

TEST(F1Macro, Examples) {
    EXPECT_NEAR(f1_macro(std::vector<Sign>{P, P, P, N, N}, std::vector<Sign>{P, P, P, P, N}),
                16.0 / 21.0, 1e-15);
    EXPECT_NEAR(f1_macro(std::vector<Sign>{P, P, P, P}, std::vector<Sign>{P, P, N, N}), 1.0 / 3.0,
                1e-15);
    EXPECT_DOUBLE_EQ(f1_macro(std::vector<Sign>{P, N, N}, std::vector<Sign>{P, N, N}), 1.0);
    EXPECT_DOUBLE_EQ(f1_macro(std::vector<Sign>{N, P}, std::vector<Sign>{P, N}), 0.0);
}

TEST(F1Macro, InvariantUnderSignSwap) {
    Rng rng(2);
    const auto flip = [](std::vector<Sign> v) {
        for (auto& s : v) s = s == P ? N : P;
        return v;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng() % 30;
        std::vector<Sign> pred(m);
        std::vector<Sign> lab(m);
        for (std::size_t i = 0; i < m; ++i) {
            pred[i] = rng() % 2 ? P : N;
            lab[i] = rng() % 2 ? P : N;
        }
        EXPECT_NEAR(f1_macro(pred, lab), f1_macro(flip(pred), flip(lab)), 1e-15);
    }
}

TEST(ClassStats, PrecisionAndRecall) {
    const auto s = class_stats(std::vector<Sign>{P, P, N, P}, std::vector<Sign>{P, N, N, N}, N);
    EXPECT_DOUBLE_EQ(s.precision, 1.0);
    EXPECT_DOUBLE_EQ(s.recall, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.f1, 0.5);
}

TEST(Evaluate, TiesGoToPositive) {
    const auto r = evaluate(std::vector<double>{0.5, 0.4999, 0.9}, std::vector<Sign>{P, N, P});
    ASSERT_TRUE(r.auc.has_value());
    EXPECT_DOUBLE_EQ(*r.auc, 1.0);
    EXPECT_DOUBLE_EQ(r.f1_macro, 1.0);
    EXPECT_EQ(predicted_sign(0.5), P);
}

TEST(Evaluate, UndefinedAucLeavesF1) {
    const auto r = evaluate(std::vector<double>{0.7, 0.2}, std::vector<Sign>{P, P});
    EXPECT_FALSE(r.auc.has_value());
    EXPECT_DOUBLE_EQ(r.f1_macro, (2.0 / 3.0 + 0.0) / 2.0);
}

}  // namespace
}  // namespace sgdnet
