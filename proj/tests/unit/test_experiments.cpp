#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "sblo/baselines.hpp"
#include "sblo/error.hpp"
#include "sblo/evaluation.hpp"
#include "sblo/experiments.hpp"
#include "sblo/synthetic.hpp"

using namespace sblo;

namespace {

struct Workspace {
    test::TempDir dir;
    Dataset data;

    explicit Workspace(std::size_t users = 60) {
        SyntheticConfig sc;
        sc.users = users;
        sc.objects = 80;
        sc.communities = 3;
        sc.min_degree = 3;
        sc.max_degree = 25;
        data = make_coupled_dataset(sc);
        write_dataset(data, dir / "social.txt", dir / "ratings.txt");
        // Re-read so the in-memory dataset matches what the config points at.
        data = load_dataset(dir / "social.txt", dir / "ratings.txt");
    }

    ExperimentConfig config(const std::string &extra) const {
        return parse_config("[data]\nname = toy\nsocial = social.txt\nratings = ratings.txt\n" + extra,
                            dir.path());
    }
};

std::size_t count_lines(const std::string &text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}

TEST_SUITE("config") {

TEST_CASE("defaults and path resolution") {
    Workspace ws(30);
    const auto cfg = ws.config("");
    CHECK(cfg.social_path == ws.dir / "social.txt");
    CHECK(cfg.runs == 20);
    CHECK(cfg.probe_fraction == 0.1);
    CHECK(cfg.list_lengths == std::vector<std::size_t>{50});
    CHECK(cfg.mask_trained);
    CHECK(cfg.tuning == TuningMode::OnTest);
    CHECK(cfg.algorithms.size() == 9);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("every key parses") {
    Workspace ws(30);
    const auto cfg = ws.config(R"(rating_threshold = 4
[protocol]
probe_fraction = 0.2
runs = 3
seed = 42
list_lengths = 10, 20
classes = all, cold-start
cold_max = 2
inactive_max = 3
active_min = 10
mask_trained = false
tuning = held-out
hamming_pairs = 500
[algorithms]
run = md, sblo
[sblo]
lambda1 = 0.1, 0.2
tolerance = 1e-9
[rwr]
theta3 = 0.5
[analysis]
sigma = 0, 0.5
rewire_seeds = 2
max_attempts_factor = 10
histogram_bins = 5
[output]
dir = out
)");
    CHECK(cfg.rating_threshold == 4.0);
    CHECK(cfg.runs == 3);
    CHECK(cfg.seed_base == 42);
    CHECK(cfg.list_lengths == std::vector<std::size_t>{10, 20});
    CHECK(cfg.classes == std::vector<UserClass>{UserClass::All, UserClass::ColdStart});
    CHECK(cfg.thresholds.active_min == 10);
    CHECK_FALSE(cfg.mask_trained);
    CHECK(cfg.tuning == TuningMode::HeldOut);
    CHECK(cfg.hamming_pairs == 500u);
    CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::Md, Algorithm::Sblo});
    CHECK(cfg.grid(Algorithm::Sblo).values[0] == std::vector<double>{0.1, 0.2});
    CHECK(cfg.grid(Algorithm::Sblo).values[1].size() == 20); // default lambda2 list kept
    CHECK(cfg.grid(Algorithm::Rwr).size() == 16);
    CHECK(cfg.solver_tolerance == 1e-9);
    CHECK(cfg.sigmas == std::vector<double>{0.0, 0.5});
    CHECK(cfg.output_dir == ws.dir / "out");
}

TEST_CASE("unknown keys and sections are errors") {
    Workspace ws(30);
    CHECK_THROWS_AS(ws.config("[protocol]\nseeds = 3\n"), ConfigError);
    CHECK_THROWS_AS(ws.config("[extras]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(ws.config("[hhp]\nepsilon = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(ws.config("[protocol]\nruns = many\n"), ConfigError);
    CHECK_THROWS_AS(ws.config("[protocol]\nclasses = all, dormant\n"), ConfigError);
    CHECK_THROWS_AS(ws.config("[algorithms]\nrun = md, svd\n"), ConfigError);
    CHECK_THROWS_AS(ws.config("[protocol]\ntuning = sometimes\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[data]\nname = x\n", ws.dir.path()), ConfigError);
    CHECK_THROWS_AS(parse_config("this is not ini", ws.dir.path()), ConfigError);
    CHECK_THROWS_AS(load_config(ws.dir / "absent.ini"), ConfigError);
}

TEST_CASE("validation") {
    Workspace ws(30);
    CHECK_THROWS_AS(parse_config("[data]\nsocial = nope.txt\nratings = ratings.txt\n", ws.dir.path()).validate(),
                    ConfigError);
    CHECK_THROWS_AS(ws.config("[protocol]\nprobe_fraction = 1.5\n").validate(), ConfigError);
    CHECK_THROWS_AS(ws.config("[protocol]\nlist_lengths = 0\n").validate(), ConfigError);
    CHECK_THROWS_AS(ws.config("[protocol]\ncold_max = 9\ninactive_max = 4\n").validate(), ConfigError);
    CHECK_THROWS_AS(ws.config("[analysis]\nsigma = 0, 2\n").validate(), ConfigError);
}

TEST_CASE("canonical text and hash") {
    Workspace ws(30);
    const auto a = ws.config("[protocol]\nruns = 3\n");
    const auto b = ws.config("[protocol]\nruns   =   3\n");
    const auto c = ws.config("[protocol]\nruns = 4\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    // the canonical text parses back to the same configuration
    const auto again = parse_config(a.canonical(), ws.dir.path());
    CHECK(again.canonical() == a.canonical());
}

TEST_CASE("grid expansion order and default sizes") {
    ParameterGrid g{{"x", "y"}, {{1, 2}, {10, 20, 30}}};
    const auto points = g.points();
    REQUIRE(points.size() == 6);
    CHECK(points[0] == ParameterPoint{{"x", 1}, {"y", 10}});
    CHECK(points[1] == ParameterPoint{{"x", 1}, {"y", 20}});
    CHECK(points[3] == ParameterPoint{{"x", 2}, {"y", 10}});
    CHECK(default_grid(Algorithm::Sblo).size() == 400);
    CHECK(default_grid(Algorithm::Hhp).size() == 11);
    CHECK(default_grid(Algorithm::Pd).size() == 11);
    CHECK(default_grid(Algorithm::CosraT).size() == 20);
    CHECK(default_grid(Algorithm::Socmd).size() == 11);
    CHECK(default_grid(Algorithm::Rwr).size() == 144);
    CHECK(default_grid(Algorithm::Md).size() == 1);
    CHECK(default_grid(Algorithm::Pd).values[0].front() == -1.0);
    CHECK(default_grid(Algorithm::Pd).values[0].back() == 0.0);
    CHECK(to_string(points[4]) == "x=2;y=20");
}

}

TEST_SUITE("experiments") {

TEST_CASE("grid search picks the argmax, first occurrence on ties") {
    Workspace ws;
    const auto split = random_split(ws.data.interactions, 0.1, 1);
    const auto labels = label_users(ws.data.interactions, ClassThresholds{});
    SUBCASE("single point") {
        ParameterGrid g{{"lambda"}, {{0.3}}};
        const auto r = grid_search(Algorithm::Hhp, g, ws.data.social, split, labels, UserClass::All);
        CHECK(r.best == 0u);
        CHECK(r.best_params() == ParameterPoint{{"lambda", 0.3}});
    }
    SUBCASE("duplicates") {
        ParameterGrid g{{"lambda"}, {{0.2, 1.0, 0.2, 1.0}}};
        const auto r = grid_search(Algorithm::Hhp, g, ws.data.social, split, labels, UserClass::All);
        REQUIRE(r.best);
        CHECK(*r.best < 2);
        CHECK(r.points[0].mean_aupr == r.points[2].mean_aupr);
        double best = 0.0;
        for (const auto &p : r.points)
            best = std::max(best, *p.mean_aupr);
        CHECK(*r.points[*r.best].mean_aupr == best);
    }
    SUBCASE("failed points are excluded") {
        ParameterGrid g{{"theta1", "theta2", "theta3"}, {{1.0}, {1.0}, {0.5}}};
        const auto r = grid_search(Algorithm::Rwr, g, SocialNetwork(ws.data.social.user_count(), {}),
                                   split, labels, UserClass::All);
        CHECK_FALSE(r.best);
        CHECK_FALSE(r.points[0].failure.empty());
        CHECK_THROWS_AS(r.best_params(), DataError);
    }
}

TEST_CASE("single-algorithm run equals direct composition") {
    Workspace ws;
    const auto cfg = ws.config("[protocol]\nruns = 1\nlist_lengths = 10\nclasses = all\n[algorithms]\nrun = md\n");
    const auto record = run_benchmark(cfg, ws.data);
    REQUIRE(record.runs.size() == 1);
    REQUIRE(record.runs[0].report);
    const auto split = random_split(ws.data.interactions, 0.1, cfg.seed_base);
    auto scores = score_md(split.train);
    scores.mask_trained(split.train);
    const auto labels = label_users(ws.data.interactions, cfg.thresholds);
    const std::vector<UserClass> classes{UserClass::All};
    const std::vector<std::size_t> lengths{10};
    const auto direct = evaluate(scores, split, labels, classes, lengths);
    REQUIRE(direct.size() == 1);
    CHECK(record.runs[0].report->aupr == direct[0].aupr);
    CHECK(record.runs[0].report->precision == direct[0].precision);
    CHECK(record.runs[0].report->hamming == direct[0].hamming);
    CHECK(record.summary[0].report->aupr == direct[0].aupr);
    CHECK_FALSE(record.summary[0].seed);
}

TEST_CASE("HHP at lambda 1 reproduces the MD rows") {
    Workspace ws;
    const auto cfg = ws.config("[protocol]\nruns = 2\nlist_lengths = 10\nclasses = all, active, inactive\n"
                               "[algorithms]\nrun = md, hhp\n[hhp]\nlambda = 1\n");
    const auto record = run_benchmark(cfg, ws.data);
    std::vector<const CellResult *> md, hhp;
    for (const auto &c : record.runs)
        (c.algorithm == Algorithm::Md ? md : hhp).push_back(&c);
    REQUIRE(md.size() == hhp.size());
    for (std::size_t k = 0; k < md.size(); ++k) {
        CHECK(md[k]->status == hhp[k]->status);
        if (!md[k]->report)
            continue;
        REQUIRE(hhp[k]->report);
        CHECK(md[k]->report->aupr == hhp[k]->report->aupr);
        CHECK(md[k]->report->precision == hhp[k]->report->precision);
        CHECK(md[k]->report->intra_similarity == hhp[k]->report->intra_similarity);
        CHECK(md[k]->report->hamming == hhp[k]->report->hamming);
        CHECK(md[k]->report->popularity == hhp[k]->report->popularity);
    }
}

TEST_CASE("cold-start cells") {
    Workspace ws;
    const auto cfg = ws.config("[protocol]\nruns = 1\nlist_lengths = 5\nclasses = cold-start\n"
                               "cold_max = 4\ninactive_max = 5\n"
                               "[algorithms]\nrun = md, hhp, pd, cosra_t, blo, grm, socmd, sblo, rwr\n"
                               "[sblo]\nlambda1 = 0.1\nlambda2 = 0.1\n[socmd]\np = 0.5\n"
                               "[rwr]\ntheta1 = 1\ntheta2 = 0\ntheta3 = 0.5\n");
    const auto record = run_benchmark(cfg, ws.data);
    for (const auto &c : record.summary) {
        if (cold_start_applicable(c.algorithm)) {
            CHECK(c.status == "ok");
        } else {
            CHECK(c.status == "not-applicable");
            CHECK_FALSE(c.report);
        }
    }
    CHECK(record.summary.size() == 9);
}

TEST_CASE("failures are recorded and the run continues") {
    Workspace ws;
    const auto cfg = ws.config("[protocol]\nruns = 1\nlist_lengths = 5\nclasses = all\n"
                               "[algorithms]\nrun = sblo, md\n[sblo]\nlambda1 = 0.1\nlambda2 = 0.1\ntolerance = 1e-300\n");
    const auto record = run_benchmark(cfg, ws.data);
    REQUIRE(record.summary.size() == 2);
    CHECK(record.summary[0].status.rfind("failed", 0) == 0);
    CHECK(record.summary[1].status == "ok");
}

TEST_CASE("held-out tuning runs") {
    Workspace ws;
    const auto cfg = ws.config("[protocol]\nruns = 2\nlist_lengths = 5\nclasses = all\ntuning = held-out\n"
                               "[algorithms]\nrun = hhp\n[hhp]\nlambda = 0.2, 0.8\n");
    const auto record = run_benchmark(cfg, ws.data);
    REQUIRE(record.grids.size() == 1);
    CHECK(record.grids[0].best);
    CHECK(record.summary[0].status == "ok");
}

TEST_CASE("results are byte-stable and shaped per algorithm and class") {
    Workspace ws;
    const auto cfg = ws.config("[protocol]\nruns = 2\nlist_lengths = 10\nclasses = all, active, inactive\n"
                               "[algorithms]\nrun = md, grm, socmd\n[socmd]\np = 0.2, 0.6\n");
    const auto one = run_benchmark(cfg, ws.data);
    const auto two = run_benchmark(cfg, ws.data);
    emit_results(one, cfg, ws.dir / "one");
    emit_results(two, cfg, ws.dir / "two");
    for (auto name : {"results.csv", "runs.csv", "grid.csv", "config.ini"})
        CHECK(test::read_file(ws.dir / "one" / name) == test::read_file(ws.dir / "two" / name));
    const auto results = test::read_file(ws.dir / "one" / "results.csv");
    CHECK(count_lines(results) == 1 + 3 * 3);
    CHECK(count_lines(test::read_file(ws.dir / "one" / "runs.csv")) == 1 + 3 * 3 * 2);
    CHECK(count_lines(test::read_file(ws.dir / "one" / "grid.csv")) == 1 + 3 * 2);
    CHECK(std::filesystem::exists(ws.dir / "one" / "metadata.json"));
}

TEST_CASE("empty record gives header-only tables") {
    Workspace ws(30);
    RunRecord empty;
    emit_results(empty, ws.config(""), ws.dir / "empty");
    CHECK(count_lines(test::read_file(ws.dir / "empty" / "results.csv")) == 1);
    CHECK(count_lines(test::read_file(ws.dir / "empty" / "grid.csv")) == 1);
}

TEST_CASE("missing parameters are reported") {
    Workspace ws(30);
    CHECK_THROWS_AS(fit_and_score(Algorithm::Hhp, {}, ws.data.social, ws.data.interactions), ArgumentError);
}

}
