#include "sblo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <fmt/core.h>

#include "sblo/error.hpp"

namespace sblo {

Dataset make_coupled_dataset(const SyntheticConfig &config) {
    if (config.users < 2 || config.objects < config.communities || config.communities == 0)
        throw ArgumentError("synthetic dataset needs >= 2 users and >= 1 object per community");
    if (config.min_degree == 0 || config.min_degree > config.max_degree ||
        config.max_degree > config.objects)
        throw ArgumentError("invalid synthetic degree range");

    std::mt19937_64 rng(config.seed);
    const auto m = config.users;
    const auto n = config.objects;
    const auto c = config.communities;

    // Heavy-tailed object appeal inside each community.
    std::vector<std::vector<Index>> community_objects(c);
    std::vector<std::vector<double>> appeal(c);
    for (Index o = 0; o < n; ++o) {
        const auto k = o % c;
        community_objects[k].push_back(o);
        appeal[k].push_back(1.0 / std::pow(static_cast<double>(community_objects[k].size()), 0.8));
    }
    std::vector<double> global_appeal(n);
    for (Index o = 0; o < n; ++o)
        global_appeal[o] = 1.0 / std::pow(static_cast<double>(o / c + 1), 0.8);

    // Degrees ~ truncated power law with exponent ~2.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw_degree = [&] {
        const double lo = static_cast<double>(config.min_degree);
        const double hi = static_cast<double>(config.max_degree) + 1.0;
        const double u = unit(rng);
        const double k = lo * hi / (hi - u * (hi - lo));
        return std::min(config.max_degree, static_cast<std::size_t>(k));
    };

    std::vector<Edge> interactions;
    std::vector<std::set<Index>> profiles(m);
    for (Index u = 0; u < m; ++u) {
        const auto community = u % c;
        std::discrete_distribution<std::size_t> local(appeal[community].begin(),
                                                      appeal[community].end());
        std::discrete_distribution<Index> global(global_appeal.begin(), global_appeal.end());
        const auto degree = draw_degree();
        auto &profile = profiles[u];
        while (profile.size() < degree) {
            const Index o = unit(rng) < config.in_community
                                ? community_objects[community][local(rng)]
                                : global(rng);
            profile.insert(o);
        }
        for (Index o : profile)
            interactions.push_back({u, o});
    }

    // Social ties to the users with the largest profile overlap.
    std::vector<Edge> ties;
    std::vector<std::pair<std::size_t, Index>> overlap;
    for (Index u = 0; u < m; ++u) {
        overlap.clear();
        for (Index v = 0; v < m; ++v) {
            if (v == u)
                continue;
            std::size_t common = 0;
            for (Index o : profiles[u])
                common += profiles[v].count(o);
            overlap.emplace_back(common, v);
        }
        std::sort(overlap.begin(), overlap.end(), [](const auto &a, const auto &b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
        for (std::size_t k = 0; k < std::min(config.ties_per_user, overlap.size()); ++k)
            if (overlap[k].first > 0)
                ties.push_back({u, overlap[k].second});
    }
    const auto random_ties =
        static_cast<std::size_t>(config.random_tie_share * static_cast<double>(ties.size()));
    std::uniform_int_distribution<Index> any_user(0, static_cast<Index>(m - 1));
    for (std::size_t k = 0; k < random_ties; ++k)
        ties.push_back({any_user(rng), any_user(rng)});

    Dataset data;
    for (Index u = 0; u < m; ++u)
        data.users.intern(fmt::format("u{}", u));
    for (Index o = 0; o < n; ++o)
        data.objects.intern(fmt::format("o{}", o));
    data.social = SocialNetwork(m, ties);
    data.interactions = InteractionNetwork(m, n, interactions);
    return data;
}

void write_dataset(const Dataset &data, const std::filesystem::path &social_path,
                   const std::filesystem::path &ratings_path, std::uint64_t seed) {
    export_social(social_path, data.social, data.users);
    std::ofstream out(ratings_path);
    if (!out)
        throw DataError("cannot write " + ratings_path.string());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> high(3, 5);
    std::uniform_int_distribution<int> low(1, 2);
    std::uniform_int_distribution<Index> any_object(
        0, static_cast<Index>(data.interactions.object_count() - 1));
    out << "# user object rating\n";
    for (const auto &e : data.interactions.edges()) {
        out << data.users.name(e.first) << ' ' << data.objects.name(e.second) << ' ' << high(rng)
            << '\n';
        const Index decoy = any_object(rng);
        if (!data.interactions.has_edge(e.first, decoy))
            out << data.users.name(e.first) << ' ' << data.objects.name(decoy) << ' ' << low(rng)
                << '\n';
    }
}

} // namespace sblo
