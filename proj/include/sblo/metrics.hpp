#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sblo/graph_data.hpp"
#include "sblo/protocol.hpp"
#include "sblo/ranking.hpp"

namespace sblo {

struct ListAccuracy {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// Hits among the list over L and over |probe|; F = 0 when there are no hits.
/// `probe_objects` must be sorted and nonempty.
ListAccuracy precision_recall_f(const RecommendationList &list,
                                std::span<const Index> probe_objects);

/// Area under the precision-recall curve of the full ranking of `eligible`
/// objects. Each relevant object found at rank p_k adds the point
/// (k/|probe|, k/p_k); the curve starts at (0, precision of the first hit) and
/// is integrated with the trapezoid rule. Relevant objects outside the
/// eligible set are never retrieved but still count in |probe|.
double aupr(std::span<const double> scores, std::span<const Index> probe_objects,
            std::span<const Index> eligible);

/// As above with every finitely scored object eligible (the masked-matrix convention).
double aupr(std::span<const double> scores, std::span<const Index> probe_objects);

/// Salton similarity of two objects' collector sets; 0 if either is empty.
double object_salton(const InteractionNetwork &train, Index a, Index b);

/// Mean pairwise Salton similarity inside the list. Needs >= 2 objects.
double intra_similarity(const RecommendationList &list, const InteractionNetwork &train);

/// Mean training degree of the listed objects (0 for an empty list).
double popularity(const RecommendationList &list, const InteractionNetwork &train);

/// Mean of 1 - |O_i & O_j| / L over unordered pairs of lists. With
/// `pair_sample` set, averages over that many uniformly drawn pairs instead.
double hamming_system(std::span<const RecommendationList> lists,
                      std::optional<std::size_t> pair_sample = std::nullopt,
                      std::uint64_t seed = 0);

struct UserMetrics {
    Index user = 0;
    double aupr = 0.0;
    ListAccuracy accuracy;
    std::optional<double> intra_similarity; // unset for lists shorter than 2
    double popularity = 0.0;
};

/// System-level averages for one user class at one list length.
struct MetricReport {
    UserClass user_class = UserClass::All;
    std::size_t list_length = 0;
    std::uint64_t seed = 0;
    std::size_t users_evaluated = 0;
    double aupr = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double intra_similarity = 0.0;
    std::optional<double> hamming; // needs two evaluated users
    double popularity = 0.0;
};

/// Averages the entries of `per_user` whose user belongs to `user_class`;
/// `lists[k]` is the list behind `per_user[k]`. Returns nullopt (with a
/// warning) when no evaluated user is in the class.
std::optional<MetricReport> aggregate(std::span<const UserMetrics> per_user,
                                      std::span<const RecommendationList> lists,
                                      const UserClassLabels &labels, UserClass user_class,
                                      std::optional<std::size_t> hamming_pairs = std::nullopt);

} // namespace sblo
