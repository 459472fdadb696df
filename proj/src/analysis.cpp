#include "sblo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <unordered_set>

#include <fmt/core.h>

#include "sblo/error.hpp"
#include "sblo/evaluation.hpp"

namespace sblo {

namespace {

std::size_t sorted_overlap(std::span<const Index> a, std::span<const Index> b) {
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
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
    return common;
}

std::uint64_t pair_key(Index a, Index b) {
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

void require_shared_users(const SocialNetwork &social, const InteractionNetwork &interactions) {
    if (social.user_count() != interactions.user_count())
        throw ConsistencyError(fmt::format("social network has {} users, interactions have {}",
                                           social.user_count(), interactions.user_count()));
}

} // namespace

double conversion_rate(const InteractionNetwork &interactions, Index from, Index to) {
    const auto receiver = interactions.items(to);
    if (receiver.empty())
        throw ArgumentError(fmt::format("conversion rate to user {} is undefined", to));
    return static_cast<double>(sorted_overlap(receiver, interactions.items(from))) /
           static_cast<double>(receiver.size());
}

ConversionRateTable conversion_rates(const SocialNetwork &social,
                                     const InteractionNetwork &interactions, std::size_t bins) {
    require_shared_users(social, interactions);
    if (bins == 0)
        throw ArgumentError("histogram needs at least one bin");
    ConversionRateTable table;
    table.histogram.assign(bins, 0.0);
    for (const auto &e : social.edges()) {
        for (auto [from, to] : {std::pair{e.second, e.first}, std::pair{e.first, e.second}}) {
            if (interactions.user_degree(to) == 0) {
                ++table.undefined_directions;
                continue;
            }
            table.rates.push_back({from, to, conversion_rate(interactions, from, to)});
        }
    }
    if (table.rates.empty())
        return table;
    std::size_t zeros = 0;
    std::size_t above = 0;
    for (const auto &r : table.rates) {
        auto bin = static_cast<std::size_t>(r.rate * static_cast<double>(bins));
        table.histogram[std::min(bin, bins - 1)] += 1.0;
        zeros += r.rate == 0.0 ? 1 : 0;
        above += r.rate > 0.2 ? 1 : 0;
    }
    const double total = static_cast<double>(table.rates.size());
    for (auto &h : table.histogram)
        h /= total;
    table.zero_share = static_cast<double>(zeros) / total;
    table.above_share = static_cast<double>(above) / total;
    return table;
}

CommonObjectStats common_object_stats(const SocialNetwork &social,
                                      const InteractionNetwork &interactions, std::uint64_t seed) {
    require_shared_users(social, interactions);
    CommonObjectStats stats;
    std::map<std::size_t, std::pair<std::size_t, double>> neighbor_bins;
    auto record = [&](Index a, Index b, std::map<std::size_t, std::size_t> &into) {
        const auto common = sorted_overlap(interactions.items(a), interactions.items(b));
        ++into[common];
        auto &bin = neighbor_bins[sorted_overlap(social.neighbors(a), social.neighbors(b))];
        ++bin.first;
        bin.second += static_cast<double>(common);
    };

    const auto linked = social.edges();
    for (const auto &e : linked)
        record(e.first, e.second, stats.linked);
    stats.linked_pairs = linked.size();

    const std::uint64_t m = social.user_count();
    const std::uint64_t all_pairs = m < 2 ? 0 : m * (m - 1) / 2;
    const std::uint64_t unlinked_total = all_pairs - linked.size();
    if (unlinked_total <= linked.size()) {
        for (Index a = 0; a < m; ++a)
            for (Index b = a + 1; b < m; ++b)
                if (!social.has_edge(a, b))
                    record(a, b, stats.unlinked);
        stats.unlinked_pairs = unlinked_total;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<Index> pick(0, static_cast<Index>(m - 1));
        std::unordered_set<std::uint64_t> seen;
        while (seen.size() < linked.size()) {
            const Index a = pick(rng);
            const Index b = pick(rng);
            if (a == b || social.has_edge(a, b) || !seen.insert(pair_key(a, b)).second)
                continue;
            record(a, b, stats.unlinked);
        }
        stats.unlinked_pairs = seen.size();
    }

    for (const auto &[neighbors, bin] : neighbor_bins)
        stats.by_common_neighbors[neighbors] = {bin.first,
                                                bin.second / static_cast<double>(bin.first)};
    return stats;
}

RewiringResult rewire_social(const SocialNetwork &social, double sigma, std::uint64_t seed,
                             std::size_t max_attempts_factor) {
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw ArgumentError(fmt::format("sigma must lie in [0,1], got {}", sigma));
    RewiringResult result{.network = social, .sigma = sigma, .seed = seed};
    const auto edge_total = social.edge_count();
    // Guard against sigma * |E| landing a hair above an integer.
    const auto target = static_cast<std::size_t>(
        std::ceil(sigma * static_cast<double>(edge_total) - 1e-9));
    if (target == 0)
        return result;
    if (edge_total < 2)
        throw ArgumentError("rewiring needs at least two social edges");

    auto edges = social.edges();
    std::unordered_set<std::uint64_t> original;
    original.reserve(edges.size() * 2);
    for (const auto &e : edges)
        original.insert(pair_key(e.first, e.second));
    auto present = original;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution flip(0.5);
    const std::size_t budget = max_attempts_factor * edge_total;
    std::size_t differing = 0;
    auto moved = [&](std::uint64_t key) { return original.count(key) == 0; };

    while (differing < target && result.swap_attempts < budget) {
        ++result.swap_attempts;
        const auto i1 = pick(rng);
        const auto i2 = pick(rng);
        if (i1 == i2)
            continue;
        auto [a, b] = edges[i1];
        auto [c, d] = edges[i2];
        if (flip(rng))
            std::swap(c, d);
        // (a,b),(c,d) -> (a,d),(c,b)
        if (a == d || c == b)
            continue;
        const auto ad = pair_key(a, d);
        const auto cb = pair_key(c, b);
        if (present.count(ad) != 0 || present.count(cb) != 0)
            continue;
        const auto ab = pair_key(a, b);
        const auto cd = pair_key(c, d);
        present.erase(ab);
        present.erase(cd);
        present.insert(ad);
        present.insert(cb);
        differing -= (moved(ab) ? 1 : 0) + (moved(cd) ? 1 : 0);
        differing += (moved(ad) ? 1 : 0) + (moved(cb) ? 1 : 0);
        edges[i1] = {std::min(a, d), std::max(a, d)};
        edges[i2] = {std::min(c, b), std::max(c, b)};
        ++result.swaps;
    }

    result.network = SocialNetwork(social.user_count(), edges);
    result.achieved_fraction = static_cast<double>(differing) / static_cast<double>(edge_total);
    result.target_reached = differing >= target;
    if (!result.target_reached)
        std::clog << fmt::format("warning: rewiring reached {:.4f} of edges changed (target {}) "
                                 "after {} attempts\n",
                                 result.achieved_fraction, sigma, result.swap_attempts);
    return result;
}

ContributionCurve social_contribution_curve(const SocialNetwork &social,
                                            const EvaluationSplit &split,
                                            const SbloParams &params,
                                            std::span<const double> sigmas,
                                            std::span<const std::uint64_t> seeds,
                                            std::size_t max_attempts_factor) {
    params.validate();
    if (seeds.empty())
        throw ArgumentError("contribution curve needs at least one seed");
    const UserClassLabels everyone(split.train.user_degrees(), ClassThresholds{});
    auto evaluate_aupr = [&](const ScoreMatrix &scores) {
        auto value = mean_aupr(scores, split, everyone, UserClass::All);
        if (!value)
            throw DataError("split has no users with probe interactions");
        return *value;
    };
    auto sblo_aupr = [&](const SocialNetwork &network) {
        const auto factors = solve_sblo(network, split.train, params);
        return evaluate_aupr(score_sblo(factors, split.train, true));
    };

    ContributionCurve curve;
    {
        const auto factors = solve_blo(split.train, params.lambda2, params.tolerance);
        curve.blo_aupr = evaluate_aupr(score_sblo(factors, split.train, true));
    }
    std::optional<double> unperturbed;
    for (double sigma : sigmas) {
        ContributionPoint point{.sigma = sigma};
        std::vector<double> values;
        double achieved = 0.0;
        for (auto seed : seeds) {
            if (sigma == 0.0) {
                if (!unperturbed)
                    unperturbed = sblo_aupr(social);
                values.push_back(*unperturbed);
                continue;
            }
            const auto rewired = rewire_social(social, sigma, seed, max_attempts_factor);
            achieved += rewired.achieved_fraction;
            values.push_back(sblo_aupr(rewired.network));
        }
        double sum = 0.0;
        for (double v : values)
            sum += v;
        point.aupr_mean = sum / static_cast<double>(values.size());
        double sq = 0.0;
        for (double v : values)
            sq += (v - point.aupr_mean) * (v - point.aupr_mean);
        point.aupr_std = std::sqrt(sq / static_cast<double>(values.size()));
        point.achieved_fraction = achieved / static_cast<double>(seeds.size());
        point.improvement_over_blo = point.aupr_mean - curve.blo_aupr;
        curve.points.push_back(point);
    }
    return curve;
}

} // namespace sblo
