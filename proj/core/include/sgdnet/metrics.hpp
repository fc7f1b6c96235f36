#pragma once

#include "sgdnet/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgdnet {

/// A metric is undefined for the given labels (e.g. AUC with one class).
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Split {
    std::vector<SignedEdge> train;
    std::vector<SignedEdge> test;
    std::uint64_t seed = 0;
    double ratio = 0.2;
};

/// Seeded uniform shuffle; the first ⌊ratio·m⌋ shuffled edges form the test set.
/// Throws ArgumentError unless 0 < ratio < 1 and m >= 5.
Split split_edges(std::span<const SignedEdge> edges, double ratio, std::uint64_t seed);

/// Mann–Whitney AUC with midranks, "+" as the positive class.
/// Throws MetricError when only one class is present.
double auc(std::span<const double> scores, std::span<const Sign> labels);

struct ClassStats {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

ClassStats class_stats(std::span<const Sign> predictions, std::span<const Sign> labels, Sign cls);

/// Mean of F1(+) and F1(−); a class with precision + recall = 0 scores 0.
double f1_macro(std::span<const Sign> predictions, std::span<const Sign> labels);

struct MetricReport {
    std::optional<double> auc;  // empty when undefined
    double f1_macro = 0.0;
    ClassStats positive;
    ClassStats negative;
};

/// Argmax predictions from p(+) (ties go to "+") and both metrics.
MetricReport evaluate(std::span<const double> p_plus, std::span<const Sign> labels);

inline Sign predicted_sign(double p_plus) { return p_plus >= 0.5 ? Sign::positive : Sign::negative; }

}  // namespace sgdnet
