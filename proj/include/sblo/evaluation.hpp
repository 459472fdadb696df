#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sblo/metrics.hpp"
#include "sblo/protocol.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo {

/// Per-user metrics at one list length, for the users that have at least
/// one probe interaction. `lists` receives the matching recommendation lists.
std::vector<UserMetrics> evaluate_users(const ScoreMatrix &scores, const EvaluationSplit &split,
                                        std::span<const Index> users, std::size_t list_length,
                                        std::vector<RecommendationList> &lists);

/// Users of `user_class` with at least one probe interaction.
std::vector<Index> evaluable_users(const EvaluationSplit &split, const UserClassLabels &labels,
                                   UserClass user_class);

/// One report per (class, list length) pair, classes outermost. Empty
/// classes are skipped.
std::vector<MetricReport> evaluate(const ScoreMatrix &scores, const EvaluationSplit &split,
                                   const UserClassLabels &labels,
                                   std::span<const UserClass> classes,
                                   std::span<const std::size_t> list_lengths,
                                   std::optional<std::size_t> hamming_pairs = std::nullopt);

/// Mean AUPR over the evaluable users of one class (0 users -> nullopt).
std::optional<double> mean_aupr(const ScoreMatrix &scores, const EvaluationSplit &split,
                                const UserClassLabels &labels, UserClass user_class);

} // namespace sblo
