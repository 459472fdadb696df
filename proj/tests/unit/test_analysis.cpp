#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "sblo/analysis.hpp"
#include "sblo/error.hpp"
#include "sblo/evaluation.hpp"

using namespace sblo;

namespace {

// Users 0..5 (i1..i6), objects 0..5 (a1..a6). i4 = user 3, i6 = user 5.
InteractionNetwork worked_example() {
    std::vector<Edge> edges{{3, 1}, {3, 2}, {3, 3}, {5, 2}, {5, 3}, {5, 4}, {5, 5}, {0, 0}};
    return InteractionNetwork(6, 6, edges);
}

}

TEST_SUITE("analysis") {

TEST_CASE("conversion rate worked example") {
    const auto b = worked_example();
    CHECK(conversion_rate(b, 5, 3) == 2.0 / 3.0);
    CHECK(conversion_rate(b, 3, 5) == 1.0 / 2.0);
    CHECK_THROWS_AS(conversion_rate(b, 3, 1), ArgumentError);
}

TEST_CASE("conversion table") {
    const auto b = worked_example();
    SocialNetwork a(6, std::vector<Edge>{{3, 5}, {0, 3}, {1, 2}});
    const auto table = conversion_rates(a, b, 4);
    // (3,5): 2/3 and 1/2; (0,3): 0 and 0; (1,2): both receivers empty
    CHECK(table.rates.size() == 4);
    CHECK(table.undefined_directions == 2);
    CHECK(table.zero_share == 0.5);
    CHECK(table.above_share == 0.5);
    double total = 0.0;
    for (double h : table.histogram)
        total += h;
    CHECK(total == doctest::Approx(1.0));
    CHECK(table.histogram[0] == 0.5);
    CHECK(table.histogram[2] == 0.5); // 1/2 and 2/3 both land in [0.5, 0.75)
    CHECK(table.histogram[3] == 0.0);
}

TEST_CASE("identical and disjoint profiles") {
    InteractionNetwork b(2, 4, std::vector<Edge>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(conversion_rate(b, 0, 1) == 1.0);
    CHECK(conversion_rate(b, 1, 0) == 1.0);
    InteractionNetwork c(2, 4, std::vector<Edge>{{0, 0}, {0, 1}, {1, 2}, {1, 3}});
    CHECK(conversion_rate(c, 0, 1) == 0.0);
    CHECK(conversion_rate(c, 1, 0) == 0.0);
}

TEST_CASE("common objects on a six-user toy, checked by enumeration") {
    std::mt19937_64 rng(77);
    auto b = test::random_interactions(6, 8, 0.45, rng);
    SocialNetwork a(6, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}});
    // 15 pairs, 7 linked, 8 unlinked: more unlinked than linked -> sampled (7 of 8)
    const auto stats = common_object_stats(a, b, 5);
    CHECK(stats.linked_pairs == 7);
    CHECK(stats.unlinked_pairs == 7);
    std::map<std::size_t, std::size_t> linked;
    for (const auto &e : a.edges()) {
        std::size_t shared = 0;
        for (Index o = 0; o < 8; ++o)
            shared += b.has_edge(e.first, o) && b.has_edge(e.second, o);
        ++linked[shared];
    }
    CHECK(stats.linked == linked);
    std::size_t unlinked_total = 0;
    for (const auto &[k, count] : stats.unlinked)
        unlinked_total += count;
    CHECK(unlinked_total == 7);

    // Denser graph: fewer unlinked than linked -> all enumerated.
    SocialNetwork dense(6, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2},
                                             {1, 3}, {1, 4}, {1, 5}, {2, 3}});
    const auto full = common_object_stats(dense, b, 5);
    CHECK(full.unlinked_pairs == 5);
    std::map<std::size_t, std::size_t> unlinked;
    for (Index x = 0; x < 6; ++x)
        for (Index y = x + 1; y < 6; ++y) {
            if (dense.has_edge(x, y))
                continue;
            std::size_t shared = 0;
            for (Index o = 0; o < 8; ++o)
                shared += b.has_edge(x, o) && b.has_edge(y, o);
            ++unlinked[shared];
        }
    CHECK(full.unlinked == unlinked);
    std::size_t binned = 0;
    for (const auto &[k, bin] : full.by_common_neighbors)
        binned += bin.pairs;
    CHECK(binned == 15);
}

TEST_CASE("empty social network gives an empty linked table") {
    std::mt19937_64 rng(1);
    auto b = test::random_interactions(5, 5, 0.5, rng);
    const auto stats = common_object_stats(SocialNetwork(5, {}), b);
    CHECK(stats.linked.empty());
    CHECK(stats.linked_pairs == 0);
    CHECK(stats.unlinked_pairs == 0);
}

TEST_CASE("rewiring preserves degrees and simplicity") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = test::random_graph(30, 60, rng);
        for (double sigma : {0.1, 0.5, 0.9}) {
            const auto r = rewire_social(g, sigma, trial, 100);
            CHECK(r.network.degrees() == g.degrees());
            CHECK(r.network.edge_count() == g.edge_count());
            for (Index u = 0; u < 30; ++u)
                CHECK_FALSE(r.network.has_edge(u, u));
            std::size_t moved = 0;
            for (const auto &e : r.network.edges())
                moved += g.has_edge(e.first, e.second) ? 0 : 1;
            CHECK(r.achieved_fraction == doctest::Approx(moved / 60.0));
            if (r.target_reached)
                CHECK(moved >= static_cast<std::size_t>(std::ceil(sigma * 60 - 1e-9)));
        }
    }
}

TEST_CASE("rewiring half of a 1000-edge graph") {
    std::mt19937_64 rng(1000);
    auto g = test::random_graph(200, 1000, rng);
    const auto r = rewire_social(g, 0.5, 3);
    CHECK(r.target_reached);
    CHECK(r.achieved_fraction >= 0.5);
    CHECK(r.network.degrees() == g.degrees());
}

TEST_CASE("sigma = 0 is the identity") {
    std::mt19937_64 rng(2);
    auto g = test::random_graph(20, 40, rng);
    const auto r = rewire_social(g, 0.0, 9);
    CHECK(r.network == g);
    CHECK(r.achieved_fraction == 0.0);
    CHECK(r.swap_attempts == 0);
}

TEST_CASE("triangle admits no swap") {
    SocialNetwork triangle(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    const auto r = rewire_social(triangle, 0.5, 1, 50);
    CHECK_FALSE(r.target_reached);
    CHECK(r.achieved_fraction == 0.0);
    CHECK(r.network == triangle);
    CHECK(r.swap_attempts == 150);
}

TEST_CASE("rewiring argument checks") {
    SocialNetwork one(2, std::vector<Edge>{{0, 1}});
    CHECK_THROWS_AS(rewire_social(one, 0.5, 1), ArgumentError);
    CHECK_THROWS_AS(rewire_social(one, 1.5, 1), ArgumentError);
    CHECK_THROWS_AS(rewire_social(one, -0.1, 1), ArgumentError);
    CHECK_NOTHROW(rewire_social(one, 0.0, 1));
}

TEST_CASE("rewiring is deterministic per seed") {
    std::mt19937_64 rng(12);
    auto g = test::random_graph(40, 100, rng);
    CHECK(rewire_social(g, 0.6, 4).network == rewire_social(g, 0.6, 4).network);
}

TEST_CASE("contribution curve basics") {
    auto [social, inter] = test::twenty_user_fixture();
    auto split = random_split(inter, 0.2, 3);
    const SbloParams params{0.1, 0.1};
    const std::vector<std::uint64_t> seeds{1, 2};
    SUBCASE("sigma 0 equals the plain SBLO evaluation") {
        const std::vector<double> sigmas{0.0};
        const auto curve = social_contribution_curve(social, split, params, sigmas, seeds);
        REQUIRE(curve.points.size() == 1);
        const UserClassLabels everyone(split.train.user_degrees(), ClassThresholds{});
        const auto direct = mean_aupr(score_sblo(solve_sblo(social, split.train, params), split.train),
                                      split, everyone, UserClass::All);
        CHECK(curve.points[0].aupr_mean == *direct);
        CHECK(curve.points[0].aupr_std == 0.0);
    }
    SUBCASE("BLO reference does not depend on sigma") {
        const std::vector<double> a{0.0}, b{0.5, 1.0};
        CHECK(social_contribution_curve(social, split, params, a, seeds).blo_aupr ==
              social_contribution_curve(social, split, params, b, seeds).blo_aupr);
    }
}

}
