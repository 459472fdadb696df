#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sblo/graph_data.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo {

/// Top of one user's ranking. `length` is the requested L; `objects` may be
/// shorter when fewer objects are eligible.
struct RecommendationList {
    Index user = 0;
    std::size_t length = 0;
    std::vector<Index> objects;
};

/// Strict ranking order: higher score first, ties broken by lower object index.
inline bool ranks_before(double score_a, Index a, double score_b, Index b) {
    return score_a > score_b || (score_a == score_b && a < b);
}

/// Objects with a finite score, best first.
std::vector<Index> rank_objects(std::span<const double> scores);

/// The first min(L, eligible) entries of rank_objects(scores).
std::vector<Index> top_objects(std::span<const double> scores, std::size_t length);

RecommendationList recommend(const ScoreMatrix &scores, Index user, std::size_t length);

} // namespace sblo
