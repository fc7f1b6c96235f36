#include "sgdnet/metrics.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/random.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>

namespace sgdnet {

Split split_edges(std::span<const SignedEdge> edges, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ArgumentError("split_edges: ratio must lie in (0, 1)");
    if (edges.size() < 5) throw ArgumentError("split_edges: need at least 5 edges");
    std::vector<SignedEdge> shuffled(edges.begin(), edges.end());
    // Fisher–Yates with an explicit generator so the split is identical across platforms.
    Rng rng(seed);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(shuffled[i], shuffled[j]);
    }
    const auto n_test = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(edges.size())));
    Split s;
    s.seed = seed;
    s.ratio = ratio;
    s.test.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_test), shuffled.end());
    return s;
}

double auc(std::span<const double> scores, std::span<const Sign> labels) {
    if (scores.size() != labels.size()) throw ArgumentError("auc: size mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == Sign::positive) {
                rank_sum += midrank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw MetricError("auc: both classes must be present");
    const double np = static_cast<double>(n_pos);
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

ClassStats class_stats(std::span<const Sign> predictions, std::span<const Sign> labels, Sign cls) {
    if (predictions.size() != labels.size()) throw ArgumentError("class_stats: size mismatch");
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool pred = predictions[i] == cls;
        const bool truth = labels[i] == cls;
        tp += pred && truth;
        fp += pred && !truth;
        fn += !pred && truth;
    }
    ClassStats s;
    s.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

double f1_macro(std::span<const Sign> predictions, std::span<const Sign> labels) {
    return 0.5 * (class_stats(predictions, labels, Sign::positive).f1 +
                  class_stats(predictions, labels, Sign::negative).f1);
}

MetricReport evaluate(std::span<const double> p_plus, std::span<const Sign> labels) {
    if (p_plus.size() != labels.size()) throw ArgumentError("evaluate: size mismatch");
    std::vector<Sign> preds(p_plus.size());
    std::transform(p_plus.begin(), p_plus.end(), preds.begin(), predicted_sign);
    MetricReport r;
    try {
        r.auc = auc(p_plus, labels);
    } catch (const MetricError&) {
        r.auc.reset();
    }
    r.positive = class_stats(preds, labels, Sign::positive);
    r.negative = class_stats(preds, labels, Sign::negative);
    r.f1_macro = 0.5 * (r.positive.f1 + r.negative.f1);
    return r;
}

}  // namespace sgdnet
