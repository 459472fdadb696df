#pragma once

// Brute-force metric recomputation for tests.

#include <cstddef>
#include <span>
#include <vector>

#include "sblo/graph_data.hpp"
#include "sblo/ranking.hpp"

namespace sblo::reference {

/// Full stable sort of the eligible objects, score descending then index.
std::vector<Index> ranking(std::span<const double> scores, std::span<const Index> eligible);

/// Sweeps every list length, keeps the (recall, precision) points where
/// recall rises, prepends (0, first precision) and integrates by trapezoids.
double aupr_sweep(std::span<const double> scores, std::span<const Index> probe,
                  std::span<const Index> eligible);

struct Accuracy {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};
Accuracy accuracy(std::span<const Index> list, std::size_t length, std::span<const Index> probe);

/// Ordered-pair double sum over the list, divided by L(L-1).
double intra_similarity(std::span<const Index> list, const InteractionNetwork &train);
double popularity(std::span<const Index> list, const InteractionNetwork &train);
/// Mean of 1 - overlap/L over every unordered pair of lists.
double hamming(std::span<const RecommendationList> lists);

} // namespace sblo::reference
