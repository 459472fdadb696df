#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sblo/error.hpp"
#include "sblo/protocol.hpp"

using namespace sblo;

TEST_SUITE("protocol") {

TEST_CASE("random split is an exact partition of the right size") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto net = test::random_interactions(25, 30, 0.2, rng);
        auto split = random_split(net, 0.1, 100 + trial);
        CHECK(split.probe.edge_count() ==
              static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(net.edge_count()))));
        CHECK(split.train.edge_count() + split.probe.edge_count() == net.edge_count());
        for (const auto &e : net.edges())
            CHECK(split.train.has_edge(e.first, e.second) != split.probe.has_edge(e.first, e.second));
        CHECK(split.train.user_count() == net.user_count());
        CHECK(split.probe.object_count() == net.object_count());
    }
}

TEST_CASE("large network probe size") {
    // 154122 edges at fraction 0.1 -> 15412 probe edges.
    std::vector<Edge> edges;
    for (Index u = 0; u < 1541; ++u)
        for (Index o = 0; o < 100; ++o)
            edges.push_back({u, o});
    for (Index o = 0; o < 22; ++o)
        edges.push_back({1541, o});
    InteractionNetwork net(1542, 100, edges);
    REQUIRE(net.edge_count() == 154122);
    CHECK(random_split(net, 0.1, 1).probe.edge_count() == 15412);
}

TEST_CASE("ten edges give one probe edge") {
    std::vector<Edge> edges;
    for (Index o = 0; o < 10; ++o)
        edges.push_back({o % 3, o});
    auto split = random_split(InteractionNetwork(3, 10, edges), 0.1, 5);
    CHECK(split.probe.edge_count() == 1);
}

TEST_CASE("split is deterministic per seed") {
    std::mt19937_64 rng(2);
    auto net = test::random_interactions(20, 20, 0.3, rng);
    CHECK(random_split(net, 0.1, 9).probe == random_split(net, 0.1, 9).probe);
    CHECK_FALSE(random_split(net, 0.1, 9).probe == random_split(net, 0.1, 10).probe);
}

TEST_CASE("probe fraction must lie in (0,1)") {
    InteractionNetwork net(1, 1, std::vector<Edge>{{0, 0}});
    CHECK_THROWS_AS(random_split(net, 0.0, 1), ArgumentError);
    CHECK_THROWS_AS(random_split(net, 1.0, 1), ArgumentError);
    CHECK_THROWS_AS(random_split(net, -0.5, 1), ArgumentError);
}

TEST_CASE("user classes follow the thresholds") {
    UserClassLabels labels({0, 2, 3, 4, 5, 29, 30, 100}, ClassThresholds{3, 4, 30});
    CHECK(labels.members(UserClass::ColdStart) == std::vector<Index>{0, 1, 2});
    CHECK(labels.members(UserClass::Inactive) == std::vector<Index>{0, 1, 2, 3});
    CHECK(labels.members(UserClass::Active) == std::vector<Index>{6, 7});
    CHECK(labels.members(UserClass::All).size() == 8);
    CHECK(labels.fraction(UserClass::Active) == doctest::Approx(0.25));
    for (Index u : labels.members(UserClass::ColdStart))
        CHECK(labels.contains(UserClass::Inactive, u));
}

TEST_CASE("everyone active") {
    UserClassLabels labels(std::vector<std::size_t>(5, 100), ClassThresholds{});
    CHECK(labels.fraction(UserClass::Active) == 1.0);
    CHECK(labels.fraction(UserClass::Inactive) == 0.0);
}

TEST_CASE("threshold ordering is checked") {
    CHECK_THROWS_AS(UserClassLabels({1, 2}, ClassThresholds{5, 4, 30}), ArgumentError);
    CHECK_THROWS_AS(UserClassLabels({1, 2}, ClassThresholds{3, 30, 30}), ArgumentError);
}

TEST_CASE("cold-start split moves every interaction of cold users") {
    std::vector<Edge> edges{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 3}};
    InteractionNetwork net(3, 5, edges);
    auto labels = label_users(net, ClassThresholds{3, 4, 30});
    auto split = cold_start_split(net, labels);
    CHECK(split.cold_start);
    CHECK(split.train.user_degree(0) == 0);
    CHECK(split.probe.user_degree(0) == 3);
    CHECK(split.train.user_degree(2) == 0);
    CHECK(split.probe.user_degree(2) == 1);
    CHECK(split.train.user_degree(1) == 5);
    CHECK(split.probe.user_degree(1) == 0);
    CHECK(split.empty_train_profiles() == 2);
}

TEST_CASE("no cold-start users leaves an empty probe") {
    std::vector<Edge> edges;
    for (Index o = 0; o < 5; ++o)
        edges.push_back({0, o});
    InteractionNetwork net(1, 5, edges);
    auto split = cold_start_split(net, label_users(net, ClassThresholds{3, 4, 30}));
    CHECK(split.probe.edge_count() == 0);
}

TEST_CASE("degree ccdf") {
    SUBCASE("degrees 1,1,2") {
        InteractionNetwork net(3, 2, std::vector<Edge>{{0, 0}, {1, 0}, {2, 0}, {2, 1}});
        auto ccdf = degree_ccdf(net);
        REQUIRE(ccdf.size() == 2);
        CHECK(ccdf[0].first == 1);
        CHECK(ccdf[0].second == 1.0);
        CHECK(ccdf[1].first == 2);
        CHECK(ccdf[1].second == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("all equal") {
        std::vector<Edge> edges;
        for (Index u = 0; u < 4; ++u)
            for (Index o = 0; o < 5; ++o)
                edges.push_back({u, o});
        auto ccdf = degree_ccdf(InteractionNetwork(4, 5, edges));
        REQUIRE(ccdf.size() == 1);
        CHECK(ccdf[0] == std::pair<std::size_t, double>{5, 1.0});
    }
    SUBCASE("empty network") {
        CHECK_THROWS(degree_ccdf(InteractionNetwork(0, 0, {})));
    }
}

TEST_CASE("split export writes reproducible files") {
    test::TempDir dir;
    IdIndex users, objects;
    for (auto id : {"a", "b", "c"})
        users.intern(id);
    for (auto id : {"x", "y"})
        objects.intern(id);
    InteractionNetwork net(3, 2, std::vector<Edge>{{0, 0}, {0, 1}, {1, 0}, {2, 1}});
    auto split = random_split(net, 0.25, 4);
    export_split(dir / "one", split, users, objects);
    export_split(dir / "two", split, users, objects);
    for (auto name : {"train.txt", "probe.txt", "split.meta", "users.tsv", "objects.tsv"}) {
        CHECK(std::filesystem::exists(dir / "one" / name));
        CHECK(test::read_file(dir / "one" / name) == test::read_file(dir / "two" / name));
    }
}

}
