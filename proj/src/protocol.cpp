#include "sblo/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include <fmt/core.h>

#include "sblo/error.hpp"

namespace sblo {

std::size_t EvaluationSplit::empty_train_profiles() const {
    std::size_t count = 0;
    for (Index u = 0; u < train.user_count(); ++u)
        if (train.user_degree(u) == 0)
            ++count;
    return count;
}

EvaluationSplit random_split(const InteractionNetwork &interactions, double probe_fraction,
                             std::uint64_t seed) {
    if (!(probe_fraction > 0.0 && probe_fraction < 1.0))
        throw ArgumentError(fmt::format("probe fraction must lie in (0,1), got {}", probe_fraction));

    auto edges = interactions.edges();
    const auto total = edges.size();
    const auto probe_size =
        static_cast<std::size_t>(std::llround(probe_fraction * static_cast<double>(total)));

    // Partial Fisher-Yates: the first probe_size slots become the probe set.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < probe_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, total - 1);
        std::swap(edges[i], edges[pick(rng)]);
    }
    std::span<const Edge> probe(edges.data(), probe_size);
    std::span<const Edge> train(edges.data() + probe_size, total - probe_size);

    EvaluationSplit split{
        .train = InteractionNetwork(interactions.user_count(), interactions.object_count(), train),
        .probe = InteractionNetwork(interactions.user_count(), interactions.object_count(), probe),
        .seed = seed,
        .probe_fraction = probe_fraction,
        .cold_start = false,
    };
    return split;
}

std::string_view to_string(UserClass c) {
    switch (c) {
    case UserClass::All: return "all";
    case UserClass::Active: return "active";
    case UserClass::Inactive: return "inactive";
    case UserClass::ColdStart: return "cold-start";
    }
    return "?";
}

std::optional<UserClass> parse_user_class(std::string_view name) {
    for (auto c : kAllUserClasses)
        if (to_string(c) == name)
            return c;
    return std::nullopt;
}

UserClassLabels::UserClassLabels(std::vector<std::size_t> degrees, ClassThresholds thresholds)
    : degrees_(std::move(degrees)), thresholds_(thresholds) {
    if (!(thresholds.cold_max <= thresholds.inactive_max &&
          thresholds.inactive_max < thresholds.active_min))
        throw ArgumentError(fmt::format(
            "class thresholds must satisfy cold_max <= inactive_max < active_min, got ({}, {}, {})",
            thresholds.cold_max, thresholds.inactive_max, thresholds.active_min));
}

bool UserClassLabels::contains(UserClass c, Index user) const {
    const auto k = degrees_.at(user);
    switch (c) {
    case UserClass::All: return true;
    case UserClass::Active: return k >= thresholds_.active_min;
    case UserClass::Inactive: return k <= thresholds_.inactive_max;
    case UserClass::ColdStart: return k <= thresholds_.cold_max;
    }
    return false;
}

double UserClassLabels::fraction(UserClass c) const {
    if (degrees_.empty())
        return 0.0;
    std::size_t count = 0;
    for (Index u = 0; u < degrees_.size(); ++u)
        count += contains(c, u) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(degrees_.size());
}

std::vector<Index> UserClassLabels::members(UserClass c) const {
    std::vector<Index> out;
    for (Index u = 0; u < degrees_.size(); ++u)
        if (contains(c, u))
            out.push_back(u);
    return out;
}

UserClassLabels label_users(const InteractionNetwork &interactions, ClassThresholds thresholds) {
    return UserClassLabels(interactions.user_degrees(), thresholds);
}

EvaluationSplit cold_start_split(const InteractionNetwork &interactions,
                                 const UserClassLabels &labels) {
    if (labels.user_count() != interactions.user_count())
        throw ConsistencyError("labels and interaction network disagree on the user count");
    std::vector<Edge> train;
    std::vector<Edge> probe;
    for (const auto &e : interactions.edges()) {
        if (labels.degree(e.first) != interactions.user_degree(e.first))
            throw ConsistencyError("labels were computed on a different interaction network");
        (labels.contains(UserClass::ColdStart, e.first) ? probe : train).push_back(e);
    }
    const auto m = interactions.user_count();
    const auto n = interactions.object_count();
    const double fraction =
        interactions.edge_count() == 0
            ? 0.0
            : static_cast<double>(probe.size()) / static_cast<double>(interactions.edge_count());
    return EvaluationSplit{
        .train = InteractionNetwork(m, n, train),
        .probe = InteractionNetwork(m, n, probe),
        .seed = 0,
        .probe_fraction = fraction,
        .cold_start = true,
    };
}

std::vector<std::pair<std::size_t, double>> degree_ccdf(const InteractionNetwork &interactions) {
    const auto m = interactions.user_count();
    if (m == 0)
        throw ArgumentError("degree distribution of an empty network");
    std::map<std::size_t, std::size_t> histogram;
    for (Index u = 0; u < m; ++u)
        ++histogram[interactions.user_degree(u)];
    std::vector<std::pair<std::size_t, double>> out;
    std::size_t at_least = m;
    for (const auto &[degree, count] : histogram) {
        out.emplace_back(degree, static_cast<double>(at_least) / static_cast<double>(m));
        at_least -= count;
    }
    return out;
}

void export_split(const std::filesystem::path &dir, const EvaluationSplit &split,
                  const IdIndex &users, const IdIndex &objects,
                  const std::optional<ClassThresholds> &thresholds) {
    std::filesystem::create_directories(dir);
    export_interactions(dir / "train.txt", split.train, users, objects);
    export_interactions(dir / "probe.txt", split.probe, users, objects);
    users.save(dir / "users.tsv");
    objects.save(dir / "objects.tsv");
    std::ofstream meta(dir / "split.meta");
    if (!meta)
        throw DataError("cannot write " + (dir / "split.meta").string());
    meta << "kind = " << (split.cold_start ? "cold-start" : "random") << '\n';
    meta << "seed = " << split.seed << '\n';
    meta << fmt::format("probe_fraction = {}\n", split.probe_fraction);
    meta << "train_edges = " << split.train.edge_count() << '\n';
    meta << "probe_edges = " << split.probe.edge_count() << '\n';
    meta << "empty_train_profiles = " << split.empty_train_profiles() << '\n';
    meta << "rating_threshold = 1\n";
    if (thresholds) {
        meta << "cold_max = " << thresholds->cold_max << '\n';
        meta << "inactive_max = " << thresholds->inactive_max << '\n';
        meta << "active_min = " << thresholds->active_min << '\n';
    }
}

} // namespace sblo
