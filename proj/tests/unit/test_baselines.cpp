#include <doctest.h>

#include "fixtures.hpp"
#include "sblo/baselines.hpp"
#include "sblo/error.hpp"
#include "sblo/factor_model.hpp"
#include "sblo/reference/reference_scores.hpp"

using namespace sblo;

namespace {

double max_gap(const RowMatrix &x, const RowMatrix &y) {
    REQUIRE(x.rows() == y.rows());
    REQUIRE(x.cols() == y.cols());
    return (x - y).cwiseAbs().maxCoeff();
}

struct Instance {
    SocialNetwork social;
    InteractionNetwork inter;
    RowMatrix a;
    RowMatrix b;
};

Instance random_instance(std::mt19937_64 &rng, std::size_t m = 5, std::size_t n = 6) {
    auto social = test::random_social(m, 0.4, rng);
    auto inter = test::random_interactions(m, n, 0.4, rng);
    return {social, inter, reference::dense_social(social), reference::dense_interactions(inter)};
}

}

TEST_SUITE("baselines") {

TEST_CASE("MD on one user with two objects") {
    InteractionNetwork net(1, 2, std::vector<Edge>{{0, 0}, {0, 1}});
    const auto f = score_md(net);
    CHECK(f(0, 0) == doctest::Approx(1.0));
    CHECK(f(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("users without interactions get zero rows") {
    InteractionNetwork net(2, 2, std::vector<Edge>{{0, 0}, {0, 1}});
    for (const auto &f : {score_md(net), score_hhp(net, 0.3), score_pd(net, -0.8)})
        CHECK(f.values().row(1).isZero(0.0));
    SocialNetwork none(2, {});
    CHECK(score_socmd(none, net, 0.0).values().row(1).isZero(0.0));
}

TEST_CASE("MD conserves each user's resource") {
    std::mt19937_64 rng(31);
    auto inter = test::random_interactions(12, 15, 0.3, rng);
    const auto f = score_md(inter);
    for (Index u = 0; u < 12; ++u)
        CHECK(f.values().row(u).sum() == doctest::Approx(static_cast<double>(inter.user_degree(u))));
}

TEST_CASE("reduction identities are exact") {
    auto [social, inter] = test::twenty_user_fixture();
    const auto md = score_md(inter).values();
    CHECK(score_hhp(inter, 1.0).values() == md);
    CHECK(score_pd(inter, 0.0).values() == md);
    CHECK(score_cosra_t(social, inter, 1.0).values() == score_cosra(inter).values());
    CHECK(score_cosra_t(SocialNetwork(20, {}), inter, 0.4).values() == score_cosra(inter).values());
}

TEST_CASE("small instances match the naive formulas") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = random_instance(rng, 3 + trial % 6, 4 + trial % 5);
        CHECK(max_gap(score_md(x.inter).values(), reference::md(x.b)) <= 1e-12);
        CHECK(max_gap(score_hhp(x.inter, 0.5).values(), reference::hhp(x.b, 0.5)) <= 1e-12);
        CHECK(max_gap(score_hhp(x.inter, 0.0).values(), reference::hhp(x.b, 0.0)) <= 1e-12);
        CHECK(max_gap(score_pd(x.inter, -0.8).values(), reference::pd(x.b, -0.8)) <= 1e-12);
        CHECK(max_gap(score_grm(x.inter).values(), reference::grm(x.b)) <= 1e-12);
        CHECK(max_gap(score_cosra_t(x.social, x.inter, 0.5).values(), reference::cosra_t(x.a, x.b, 0.5)) <= 1e-12);
        CHECK(max_gap(score_cosra_t(x.social, x.inter, 1.7).values(), reference::cosra_t(x.a, x.b, 1.7)) <= 1e-12);
        CHECK(max_gap(score_socmd(x.social, x.inter, 0.3).values(), reference::socmd(x.a, x.b, 0.3)) <= 1e-12);
        if (x.social.edge_count() > 0)
            CHECK(max_gap(score_rwr(x.social, x.inter, 1.0, 2.0, 0.6).values(),
                          reference::rwr(x.a, x.b, 1.0, 2.0, 0.6)) <= 1e-12);
    }
}

TEST_CASE("HHP at lambda 0 is heat conduction") {
    std::mt19937_64 rng(2);
    auto inter = test::random_interactions(6, 7, 0.4, rng);
    // HC: f_ia = (1/k_a) sum_l b_la / k_l * sum_b b_lb b_ib
    const auto b = reference::dense_interactions(inter);
    RowMatrix hc = RowMatrix::Zero(6, 7);
    for (int i = 0; i < 6; ++i)
        for (int a = 0; a < 7; ++a) {
            if (inter.object_degree(a) == 0)
                continue;
            for (int l = 0; l < 6; ++l) {
                if (b(l, a) == 0.0)
                    continue;
                double shared = 0.0;
                for (int o = 0; o < 7; ++o)
                    shared += b(l, o) * b(i, o);
                hc(i, a) += shared / static_cast<double>(inter.user_degree(l));
            }
            hc(i, a) /= static_cast<double>(inter.object_degree(a));
        }
    CHECK(max_gap(score_hhp(inter, 0.0).values(), hc) <= 1e-12);
}

TEST_CASE("GRM ranks by object degree") {
    InteractionNetwork net(3, 3, std::vector<Edge>{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 2}, {2, 2}});
    const auto f = score_grm(net);
    for (Index u = 0; u < 3; ++u) {
        CHECK(f(u, 0) == 3.0);
        CHECK(f(u, 1) == 1.0);
        CHECK(f(u, 2) == 2.0);
    }
}

TEST_CASE("restart walk on a two-user clique") {
    SocialNetwork pair(2, std::vector<Edge>{{0, 1}});
    // T = [[0,1],[1,0]]; (I - t T)^{-1} = [[1,t],[t,1]] / (1 - t^2)
    const double t = 0.5;
    const auto r = rwr_social_similarity(pair, t);
    CHECK(r(0, 0) == doctest::Approx((1 - t) / (1 - t * t)));
    CHECK(r(0, 1) == doctest::Approx((1 - t) * t / (1 - t * t)));
    CHECK(r(1, 0) == doctest::Approx(r(0, 1)));
}

TEST_CASE("restart walk limits and isolated users") {
    SocialNetwork net(3, std::vector<Edge>{{0, 1}});
    const auto tiny = rwr_social_similarity(net, 1e-9);
    CHECK((tiny - RowMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    const auto r = rwr_social_similarity(net, 0.4);
    CHECK(r(2, 2) == doctest::Approx(0.6));
    CHECK(r(2, 0) == 0.0);
    CHECK(r(2, 1) == 0.0);
    std::mt19937_64 rng(12);
    auto g = test::random_social(7, 0.4, rng);
    CHECK(max_gap(rwr_social_similarity(g, 0.7), reference::restart_walk(reference::dense_social(g), 0.7)) <= 1e-12);
}

TEST_CASE("RWR with theta1 = 0 uses only the Salton weights where r^A > 0") {
    // Connected graph: r^A > 0 everywhere.
    SocialNetwork path(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    std::mt19937_64 rng(19);
    auto inter = test::random_interactions(4, 6, 0.5, rng);
    const auto b = reference::dense_interactions(inter);
    const auto want = reference::multiply(reference::user_salton(b), b);
    CHECK(max_gap(score_rwr(path, inter, 0.0, 1.0, 0.5).values(), want) <= 1e-12);
}

TEST_CASE("SocMD mixture endpoints") {
    std::mt19937_64 rng(41);
    auto x = random_instance(rng, 6, 7);
    const auto md = score_md(x.inter).values();
    RowMatrix scaled = md;
    for (Index u = 0; u < 6; ++u)
        if (x.inter.user_degree(u) > 0)
            scaled.row(u) /= static_cast<double>(x.inter.user_degree(u));
    CHECK(max_gap(score_socmd(x.social, x.inter, 1.0).values(), scaled) <= 1e-12);
}

TEST_CASE("argument validation") {
    auto [social, inter] = test::twenty_user_fixture();
    CHECK_THROWS_AS(score_hhp(inter, 1.5), ArgumentError);
    CHECK_THROWS_AS(score_hhp(inter, -0.1), ArgumentError);
    CHECK_THROWS_AS(score_socmd(social, inter, 1.1), ArgumentError);
    CHECK_THROWS_AS(score_rwr(social, inter, 1.0, 1.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(score_rwr(social, inter, 1.0, 1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(score_rwr(SocialNetwork(20, {}), inter, 1.0, 1.0, 0.5), ArgumentError);
    CHECK_THROWS_AS(score_rwr(social, inter, -1.0, 1.0, 0.5), ArgumentError);
    BaselineParams params;
    CHECK_NOTHROW(params.validate());
    params.socmd_p = 2.0;
    CHECK_THROWS_AS(params.validate(), ArgumentError);
}

TEST_CASE("non-positive CosRA+T exponent leaves zero resource at zero") {
    auto [social, inter] = test::twenty_user_fixture();
    const auto f = score_cosra_t(social, inter, -0.5);
    CHECK(f.values().allFinite());
    const auto g = score_cosra_t(social, inter, 0.0);
    CHECK(g.values().allFinite());
}

TEST_CASE("masking never recommends train items") {
    auto [social, inter] = test::twenty_user_fixture();
    std::vector<ScoreMatrix> all{score_md(inter), score_hhp(inter, 0.4), score_pd(inter, -0.5),
                                 score_grm(inter), score_cosra_t(social, inter, 0.5),
                                 score_socmd(social, inter, 0.5),
                                 score_rwr(social, inter, 1.0, 1.0, 0.5),
                                 score_sblo(solve_sblo(social, inter, {0.1, 0.1}), inter, false)};
    for (auto &f : all) {
        f.mask_trained(inter);
        for (const auto &e : inter.edges())
            CHECK(f(e.first, e.second) == ScoreMatrix::kExcluded);
    }
}

TEST_CASE("scores do not depend on repeated evaluation") {
    auto [social, inter] = test::twenty_user_fixture();
    CHECK(score_socmd(social, inter, 0.3).values() == score_socmd(social, inter, 0.3).values());
    CHECK(score_rwr(social, inter, 1, 1, .5).values() == score_rwr(social, inter, 1, 1, .5).values());
}

}
