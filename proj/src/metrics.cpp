#include "sblo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

#include <fmt/core.h>

#include "sblo/error.hpp"

namespace sblo {

ListAccuracy precision_recall_f(const RecommendationList &list,
                                std::span<const Index> probe_objects) {
    if (probe_objects.empty())
        throw ArgumentError(fmt::format("user {} has no probe objects", list.user));
    if (list.length == 0)
        throw ArgumentError("list length must be positive");
    std::size_t hits = 0;
    for (Index o : list.objects)
        if (std::binary_search(probe_objects.begin(), probe_objects.end(), o))
            ++hits;
    ListAccuracy acc;
    acc.precision = static_cast<double>(hits) / static_cast<double>(list.length);
    acc.recall = static_cast<double>(hits) / static_cast<double>(probe_objects.size());
    if (hits > 0)
        acc.f_score = 2.0 * acc.precision * acc.recall / (acc.precision + acc.recall);
    return acc;
}

double aupr(std::span<const double> scores, std::span<const Index> probe_objects,
            std::span<const Index> eligible) {
    if (eligible.empty())
        throw ArgumentError("no eligible objects to rank");
    if (probe_objects.empty())
        throw ArgumentError("no probe objects");

    // Rank of each retrievable probe object = 1 + number of eligible objects
    // ranked strictly before it.
    std::vector<std::size_t> ranks;
    ranks.reserve(probe_objects.size());
    for (Index q : probe_objects) {
        if (!std::binary_search(eligible.begin(), eligible.end(), q))
            continue;
        std::size_t ahead = 0;
        for (Index o : eligible)
            ahead += ranks_before(scores[o], o, scores[q], q) ? 1 : 0;
        ranks.push_back(ahead + 1);
    }
    std::sort(ranks.begin(), ranks.end());

    const double total = static_cast<double>(probe_objects.size());
    double area = 0.0;
    double prev_recall = 0.0;
    double prev_precision = 0.0;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        const double recall = static_cast<double>(k + 1) / total;
        const double precision = static_cast<double>(k + 1) / static_cast<double>(ranks[k]);
        if (k == 0)
            prev_precision = precision;
        area += (recall - prev_recall) * 0.5 * (prev_precision + precision);
        prev_recall = recall;
        prev_precision = precision;
    }
    return area;
}

double aupr(std::span<const double> scores, std::span<const Index> probe_objects) {
    std::vector<Index> eligible;
    eligible.reserve(scores.size());
    for (std::size_t o = 0; o < scores.size(); ++o)
        if (std::isfinite(scores[o]))
            eligible.push_back(static_cast<Index>(o));
    return aupr(scores, probe_objects, eligible);
}

double object_salton(const InteractionNetwork &train, Index a, Index b) {
    const auto ca = train.collectors(a);
    const auto cb = train.collectors(b);
    if (ca.empty() || cb.empty())
        return 0.0;
    std::size_t common = 0;
    auto ia = ca.begin();
    auto ib = cb.begin();
    while (ia != ca.end() && ib != cb.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return static_cast<double>(common) /
           std::sqrt(static_cast<double>(ca.size()) * static_cast<double>(cb.size()));
}

double intra_similarity(const RecommendationList &list, const InteractionNetwork &train) {
    const auto size = list.objects.size();
    if (size < 2)
        throw ArgumentError("intra-similarity needs at least two recommended objects");
    // z is symmetric, so the ordered-pair mean equals the unordered one.
    double sum = 0.0;
    for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = a + 1; b < size; ++b)
            sum += object_salton(train, list.objects[a], list.objects[b]);
    return sum / (static_cast<double>(size) * static_cast<double>(size - 1) / 2.0);
}

double popularity(const RecommendationList &list, const InteractionNetwork &train) {
    if (list.objects.empty())
        return 0.0;
    double sum = 0.0;
    for (Index o : list.objects)
        sum += static_cast<double>(train.object_degree(o));
    return sum / static_cast<double>(list.objects.size());
}

namespace {

std::size_t overlap(const RecommendationList &a, const RecommendationList &b) {
    std::size_t common = 0;
    for (Index o : a.objects)
        if (std::find(b.objects.begin(), b.objects.end(), o) != b.objects.end())
            ++common;
    return common;
}

} // namespace

double hamming_system(std::span<const RecommendationList> lists,
                      std::optional<std::size_t> pair_sample, std::uint64_t seed) {
    const auto count = lists.size();
    if (count < 2)
        throw ArgumentError("Hamming distance needs at least two lists");
    const auto length = lists.front().length;
    if (length == 0)
        throw ArgumentError("list length must be positive");
    for (const auto &l : lists)
        if (l.length != length)
            throw ArgumentError("all lists must share one length L");

    if (pair_sample) {
        if (*pair_sample == 0)
            throw ArgumentError("pair sample size must be positive");
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, count - 1);
        double sum = 0.0;
        for (std::size_t s = 0; s < *pair_sample; ++s) {
            std::size_t a = pick(rng);
            std::size_t b = pick(rng);
            while (b == a)
                b = pick(rng);
            sum += 1.0 - static_cast<double>(overlap(lists[a], lists[b])) /
                             static_cast<double>(length);
        }
        return sum / static_cast<double>(*pair_sample);
    }

    // sum over pairs of |O_i & O_j| = sum over objects of C(c_o, 2), where
    // c_o counts the lists containing o.
    Index max_object = 0;
    for (const auto &l : lists)
        for (Index o : l.objects)
            max_object = std::max(max_object, o);
    std::vector<std::size_t> containing(static_cast<std::size_t>(max_object) + 1, 0);
    for (const auto &l : lists)
        for (Index o : l.objects)
            ++containing[o];
    double shared = 0.0;
    for (auto c : containing)
        shared += static_cast<double>(c) * static_cast<double>(c - (c > 0 ? 1 : 0)) / 2.0;
    const double pairs = static_cast<double>(count) * static_cast<double>(count - 1) / 2.0;
    return 1.0 - shared / (pairs * static_cast<double>(length));
}

std::optional<MetricReport> aggregate(std::span<const UserMetrics> per_user,
                                      std::span<const RecommendationList> lists,
                                      const UserClassLabels &labels, UserClass user_class,
                                      std::optional<std::size_t> hamming_pairs) {
    if (per_user.size() != lists.size())
        throw ArgumentError("per-user metrics and lists differ in size");
    MetricReport report;
    report.user_class = user_class;
    std::vector<RecommendationList> members;
    std::size_t intra_count = 0;
    for (std::size_t k = 0; k < per_user.size(); ++k) {
        const auto &u = per_user[k];
        if (!labels.contains(user_class, u.user))
            continue;
        ++report.users_evaluated;
        report.aupr += u.aupr;
        report.precision += u.accuracy.precision;
        report.recall += u.accuracy.recall;
        report.f_score += u.accuracy.f_score;
        report.popularity += u.popularity;
        if (u.intra_similarity) {
            report.intra_similarity += *u.intra_similarity;
            ++intra_count;
        }
        report.list_length = lists[k].length;
        members.push_back(lists[k]);
    }
    if (report.users_evaluated == 0) {
        std::clog << "warning: no evaluated users in class " << to_string(user_class)
                  << "; class omitted\n";
        return std::nullopt;
    }
    const double n = static_cast<double>(report.users_evaluated);
    report.aupr /= n;
    report.precision /= n;
    report.recall /= n;
    report.f_score /= n;
    report.popularity /= n;
    if (intra_count > 0)
        report.intra_similarity /= static_cast<double>(intra_count);
    if (members.size() >= 2)
        report.hamming = hamming_system(members, hamming_pairs);
    return report;
}

} // namespace sblo
