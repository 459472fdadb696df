#include "sblo/ranking.hpp"

#include <algorithm>
#include <cmath>

namespace sblo {

namespace {

std::vector<Index> eligible(std::span<const double> scores) {
    std::vector<Index> out;
    out.reserve(scores.size());
    for (std::size_t o = 0; o < scores.size(); ++o)
        if (std::isfinite(scores[o]))
            out.push_back(static_cast<Index>(o));
    return out;
}

} // namespace

std::vector<Index> rank_objects(std::span<const double> scores) {
    auto order = eligible(scores);
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return ranks_before(scores[a], a, scores[b], b); });
    return order;
}

std::vector<Index> top_objects(std::span<const double> scores, std::size_t length) {
    auto order = eligible(scores);
    const auto keep = std::min(length, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](Index a, Index b) { return ranks_before(scores[a], a, scores[b], b); });
    order.resize(keep);
    return order;
}

RecommendationList recommend(const ScoreMatrix &scores, Index user, std::size_t length) {
    return RecommendationList{.user = user,
                              .length = length,
                              .objects = top_objects(scores.row(user), length)};
}

} // namespace sblo
