#include "sblo/evaluation.hpp"

#include "sblo/error.hpp"

namespace sblo {

namespace {

void check_shapes(const ScoreMatrix &scores, const EvaluationSplit &split) {
    if (scores.user_count() != split.probe.user_count() ||
        scores.object_count() != split.probe.object_count())
        throw ConsistencyError("score matrix and split have different shapes");
}

} // namespace

std::vector<Index> evaluable_users(const EvaluationSplit &split, const UserClassLabels &labels,
                                   UserClass user_class) {
    if (labels.user_count() != split.probe.user_count())
        throw ConsistencyError("labels and split disagree on the user count");
    std::vector<Index> out;
    for (Index u = 0; u < split.probe.user_count(); ++u)
        if (split.probe.user_degree(u) > 0 && labels.contains(user_class, u))
            out.push_back(u);
    return out;
}

std::vector<UserMetrics> evaluate_users(const ScoreMatrix &scores, const EvaluationSplit &split,
                                        std::span<const Index> users, std::size_t list_length,
                                        std::vector<RecommendationList> &lists) {
    check_shapes(scores, split);
    const auto count = static_cast<std::ptrdiff_t>(users.size());
    std::vector<UserMetrics> out(users.size());
    lists.assign(users.size(), {});
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const Index u = users[static_cast<std::size_t>(k)];
        const auto probe = split.probe.items(u);
        auto &metrics = out[static_cast<std::size_t>(k)];
        auto &list = lists[static_cast<std::size_t>(k)];
        list = recommend(scores, u, list_length);
        metrics.user = u;
        metrics.aupr = aupr(scores.row(u), probe);
        metrics.accuracy = precision_recall_f(list, probe);
        if (list.objects.size() >= 2)
            metrics.intra_similarity = intra_similarity(list, split.train);
        metrics.popularity = popularity(list, split.train);
    }
    return out;
}

std::vector<MetricReport> evaluate(const ScoreMatrix &scores, const EvaluationSplit &split,
                                   const UserClassLabels &labels,
                                   std::span<const UserClass> classes,
                                   std::span<const std::size_t> list_lengths,
                                   std::optional<std::size_t> hamming_pairs) {
    check_shapes(scores, split);
    // Evaluate the union of the requested classes once per length.
    std::vector<Index> users;
    for (Index u = 0; u < split.probe.user_count(); ++u) {
        if (split.probe.user_degree(u) == 0)
            continue;
        for (auto c : classes) {
            if (labels.contains(c, u)) {
                users.push_back(u);
                break;
            }
        }
    }
    std::vector<MetricReport> reports;
    std::vector<std::vector<UserMetrics>> per_length;
    std::vector<std::vector<RecommendationList>> list_sets;
    for (auto length : list_lengths) {
        list_sets.emplace_back();
        per_length.push_back(evaluate_users(scores, split, users, length, list_sets.back()));
    }
    for (auto c : classes) {
        for (std::size_t k = 0; k < list_lengths.size(); ++k) {
            auto report = aggregate(per_length[k], list_sets[k], labels, c, hamming_pairs);
            if (!report)
                continue;
            report->list_length = list_lengths[k];
            report->seed = split.seed;
            reports.push_back(*report);
        }
    }
    return reports;
}

std::optional<double> mean_aupr(const ScoreMatrix &scores, const EvaluationSplit &split,
                                const UserClassLabels &labels, UserClass user_class) {
    check_shapes(scores, split);
    const auto users = evaluable_users(split, labels, user_class);
    if (users.empty())
        return std::nullopt;
    std::vector<double> values(users.size());
    const auto count = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const Index u = users[static_cast<std::size_t>(k)];
        values[static_cast<std::size_t>(k)] = aupr(scores.row(u), split.probe.items(u));
    }
    double sum = 0.0;
    for (double v : values)
        sum += v;
    return sum / static_cast<double>(values.size());
}

} // namespace sblo
