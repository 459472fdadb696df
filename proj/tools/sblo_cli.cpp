#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "sblo/analysis.hpp"
#include "sblo/config.hpp"
#include "sblo/error.hpp"
#include "sblo/evaluation.hpp"
#include "sblo/experiments.hpp"
#include "sblo/factor_model.hpp"
#include "sblo/graph_data.hpp"
#include "sblo/matrix_io.hpp"
#include "sblo/protocol.hpp"
#include "sblo/synthetic.hpp"

namespace fs = std::filesystem;
using namespace sblo;

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kNumerical = 3 };

struct Options {
    std::string config;
    std::vector<std::string> algos;
    std::optional<std::uint64_t> seed;
    std::vector<std::size_t> lengths;
    std::vector<double> sigmas;
    std::vector<std::string> params;
    std::string out;
    bool cold_start = false;
};

ExperimentConfig load(const Options &opt) {
    auto cfg = load_config(opt.config);
    if (!opt.algos.empty()) {
        cfg.algorithms.clear();
        for (const auto &name : opt.algos) {
            auto a = parse_algorithm(name);
            if (!a)
                throw ConfigError("unknown algorithm '" + name + "'");
            cfg.algorithms.push_back(*a);
        }
    }
    if (opt.seed)
        cfg.seed_base = *opt.seed;
    if (!opt.lengths.empty())
        cfg.list_lengths = opt.lengths;
    if (!opt.sigmas.empty())
        cfg.sigmas = opt.sigmas;
    if (!opt.out.empty())
        cfg.output_dir = opt.out;
    cfg.validate();
    return cfg;
}

Dataset load_data(const ExperimentConfig &cfg) {
    return load_dataset(cfg.social_path, cfg.ratings_path, cfg.rating_threshold);
}

std::ofstream open(const fs::path &path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path.string());
    return out;
}

// --param name=value overrides; the rest come from single-valued grids.
ParameterPoint resolve_point(Algorithm a, const ExperimentConfig &cfg,
                             const std::vector<std::string> &overrides,
                             const std::function<ParameterPoint()> &tune) {
    const auto &grid = cfg.grid(a);
    ParameterPoint point;
    bool needs_tuning = false;
    for (std::size_t k = 0; k < grid.names.size(); ++k) {
        std::optional<double> value;
        for (const auto &text : overrides) {
            const auto eq = text.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--param expects name=value, got '" + text + "'");
            if (text.substr(0, eq) == grid.names[k]) {
                try {
                    value = std::stod(text.substr(eq + 1));
                } catch (const std::exception &) {
                    throw ConfigError("bad value in --param " + text);
                }
            }
        }
        if (!value && grid.values[k].size() == 1)
            value = grid.values[k].front();
        if (!value)
            needs_tuning = true;
        point.emplace_back(grid.names[k], value.value_or(0.0));
    }
    for (const auto &text : overrides) {
        const auto name = text.substr(0, text.find('='));
        if (std::find(grid.names.begin(), grid.names.end(), name) == grid.names.end())
            throw ConfigError(fmt::format("{} has no parameter '{}'", to_string(a), name));
    }
    if (!needs_tuning)
        return point;
    auto tuned = tune();
    for (std::size_t k = 0; k < point.size(); ++k) {
        bool overridden = false;
        for (const auto &text : overrides)
            overridden |= text.substr(0, text.find('=')) == point[k].first;
        if (!overridden)
            point[k].second = tuned[k].second;
    }
    return point;
}

int cmd_ingest(const Options &opt) {
    const auto cfg = load(opt);
    const auto data = load_data(cfg);
    const auto stats = compute_stats(data.social, data.interactions);
    const auto labels = label_users(data.interactions, cfg.thresholds);
    fmt::print("dataset            {}\n", cfg.dataset_name);
    fmt::print("users              {}\n", stats.users);
    fmt::print("objects            {}\n", stats.objects);
    fmt::print("social edges       {}\n", stats.social_edges);
    fmt::print("interactions       {}\n", stats.interactions);
    fmt::print("mean social degree {:.4f}\n", stats.mean_social_degree);
    fmt::print("mean user degree   {:.4f}\n", stats.mean_interaction_degree);
    fmt::print("social sparsity    {:.6g}\n", stats.social_sparsity);
    fmt::print("interaction sparsity {:.6g}\n", stats.interaction_sparsity);
    for (auto c : kAllUserClasses)
        fmt::print("class {:<12} {:.4f}\n", to_string(c), labels.fraction(c));
    const auto dir = cfg.output_dir / "ingest";
    auto ccdf = open(dir / "degree_ccdf.csv");
    ccdf << "degree,ccdf\n";
    for (const auto &[k, p] : degree_ccdf(data.interactions))
        ccdf << fmt::format("{},{:.12g}\n", k, p);
    data.users.save(dir / "users.tsv");
    data.objects.save(dir / "objects.tsv");
    return kOk;
}

int cmd_split(const Options &opt) {
    const auto cfg = load(opt);
    const auto data = load_data(cfg);
    const auto labels = label_users(data.interactions, cfg.thresholds);
    const auto split = opt.cold_start ? cold_start_split(data.interactions, labels)
                                      : random_split(data.interactions, cfg.probe_fraction,
                                                     cfg.seed_base);
    const auto dir = cfg.output_dir /
                     (opt.cold_start ? std::string("split-cold-start")
                                     : fmt::format("split-{}", cfg.seed_base));
    export_split(dir, split, data.users, data.objects,
                 opt.cold_start ? std::optional(cfg.thresholds) : std::nullopt);
    fmt::print("train {} probe {} empty train profiles {} -> {}\n", split.train.edge_count(),
               split.probe.edge_count(), split.empty_train_profiles(), dir.string());
    return kOk;
}

int cmd_fit(const Options &opt) {
    const auto cfg = load(opt);
    if (cfg.algorithms.size() != 1 || opt.algos.empty())
        throw ConfigError("fit needs exactly one --algo");
    const auto a = cfg.algorithms.front();
    if (opt.cold_start && !cold_start_applicable(a))
        std::cerr << "warning: " << to_string(a)
                  << " cannot rank for users without training data; cold-start numbers are tie order\n";
    const auto data = load_data(cfg);
    const auto labels = label_users(data.interactions, cfg.thresholds);
    const auto split = opt.cold_start ? cold_start_split(data.interactions, labels)
                                      : random_split(data.interactions, cfg.probe_fraction,
                                                     cfg.seed_base);
    const auto point = resolve_point(a, cfg, opt.params, [&] {
        return grid_search(a, cfg.grid(a), data.social, split, labels,
                           opt.cold_start ? UserClass::ColdStart : UserClass::All,
                           cfg.solver_tolerance, cfg.mask_trained)
            .best_params();
    });
    const auto dir = cfg.output_dir / fmt::format("fit-{}-{}", to_string(a),
                                                  opt.cold_start ? std::string("cold-start")
                                                                 : std::to_string(cfg.seed_base));
    fs::create_directories(dir);
    SbloParams recorded;
    if (a == Algorithm::Sblo || a == Algorithm::Blo) {
        recorded.lambda1 = a == Algorithm::Sblo ? parameter(point, "lambda1") : 0.0;
        recorded.lambda2 = parameter(point, "lambda2");
        recorded.tolerance = cfg.solver_tolerance;
        const auto factors = a == Algorithm::Sblo
                                 ? solve_sblo(data.social, split.train, recorded)
                                 : solve_blo(split.train, recorded.lambda2, recorded.tolerance);
        write_dump(dir / "S.bin", to_dump(factors));
        fmt::print("residual {:.3e}\n", factors.residual());
    }
    const auto scores =
        fit_and_score(a, point, data.social, split.train, cfg.solver_tolerance, cfg.mask_trained);
    write_dump(dir / "R.bin", to_dump(scores, recorded, fingerprint(split.train)));
    const std::vector<UserClass> classes{opt.cold_start ? UserClass::ColdStart : UserClass::All};
    for (const auto &r : evaluate(scores, split, labels, classes, cfg.list_lengths,
                                  cfg.hamming_pairs))
        fmt::print("{} [{}] L={} AUPR={:.6f} Pre={:.6f} Rec={:.6f} users={}\n", to_string(a),
                   to_string(point), r.list_length, r.aupr, r.precision, r.recall,
                   r.users_evaluated);
    fmt::print("-> {}\n", dir.string());
    return kOk;
}

int cmd_evaluate(const Options &opt) {
    const auto cfg = load(opt);
    const auto record = run_benchmark(cfg);
    emit_results(record, cfg, cfg.output_dir);
    for (const auto &c : record.summary) {
        if (c.report)
            fmt::print("{:<8} {:<11} L={:<4} AUPR={:.6f} Pre={:.6f} Rec={:.6f} H={} Pop={:.3f}\n",
                       to_string(c.algorithm), to_string(c.user_class), c.list_length,
                       c.report->aupr, c.report->precision, c.report->recall,
                       c.report->hamming ? fmt::format("{:.4f}", *c.report->hamming) : "-",
                       c.report->popularity);
        else
            fmt::print("{:<8} {:<11} L={:<4} {}\n", to_string(c.algorithm),
                       to_string(c.user_class), c.list_length, c.status);
    }
    fmt::print("config hash {:016x} -> {}\n", record.config_hash, cfg.output_dir.string());
    return kOk;
}

int cmd_grid(const Options &opt) {
    const auto cfg = load(opt);
    const auto data = load_data(cfg);
    const auto labels = label_users(data.interactions, cfg.thresholds);
    std::vector<EvaluationSplit> splits;
    for (auto seed : run_seeds(cfg))
        splits.push_back(random_split(data.interactions, cfg.probe_fraction, seed));
    std::vector<UserClass> classes;
    for (auto c : cfg.classes)
        if (c != UserClass::ColdStart)
            classes.push_back(c);
    std::vector<GridSearchResult> all;
    for (auto a : cfg.algorithms) {
        if (classes.empty())
            break;
        for (auto &r : grid_search(a, cfg.grid(a), data.social, splits, labels, classes,
                                   cfg.solver_tolerance, cfg.mask_trained)) {
            fmt::print("{:<8} {:<9} best {}\n", to_string(a), to_string(r.user_class),
                       r.best ? fmt::format("{} (AUPR {:.6f})", to_string(r.best_params()),
                                            *r.points[*r.best].mean_aupr)
                              : std::string("none"));
            all.push_back(std::move(r));
        }
    }
    fs::create_directories(cfg.output_dir);
    write_grid_table(all, cfg.output_dir / "grid.csv");
    return kOk;
}

int cmd_rewire_curve(const Options &opt) {
    const auto cfg = load(opt);
    const auto data = load_data(cfg);
    const auto split = random_split(data.interactions, cfg.probe_fraction, cfg.seed_base);
    const auto labels = label_users(data.interactions, cfg.thresholds);
    const auto point = resolve_point(Algorithm::Sblo, cfg, opt.params, [&] {
        return grid_search(Algorithm::Sblo, cfg.grid(Algorithm::Sblo), data.social, split, labels,
                           UserClass::All, cfg.solver_tolerance, cfg.mask_trained)
            .best_params();
    });
    const SbloParams params{parameter(point, "lambda1"), parameter(point, "lambda2"),
                            cfg.solver_tolerance};
    std::vector<std::uint64_t> seeds;
    for (std::size_t k = 0; k < cfg.rewire_seeds; ++k)
        seeds.push_back(cfg.seed_base + k);
    const auto curve = social_contribution_curve(data.social, split, params, cfg.sigmas, seeds,
                                                 cfg.max_attempts_factor);
    auto out = open(cfg.output_dir / "contribution_curve.csv");
    out << "sigma,AUPR_mean,AUPR_std,improvement_over_BLO,achieved_fraction\n";
    for (const auto &p : curve.points) {
        out << fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g}\n", p.sigma, p.aupr_mean,
                           p.aupr_std, p.improvement_over_blo, p.achieved_fraction);
        fmt::print("sigma={:<5} AUPR={:.6f} +-{:.6f} over BLO {:+.6f} changed {:.3f}\n", p.sigma,
                   p.aupr_mean, p.aupr_std, p.improvement_over_blo, p.achieved_fraction);
    }
    fmt::print("BLO AUPR {:.6f}; SBLO at {}\n", curve.blo_aupr, to_string(point));
    return kOk;
}

int cmd_analyze(const Options &opt) {
    const auto cfg = load(opt);
    const auto data = load_data(cfg);
    const auto dir = cfg.output_dir / "analysis";
    const auto rates = conversion_rates(data.social, data.interactions, cfg.histogram_bins);
    {
        auto out = open(dir / "conversion_histogram.csv");
        out << "bin_low,bin_high,proportion\n";
        const double width = 1.0 / static_cast<double>(rates.histogram.size());
        for (std::size_t k = 0; k < rates.histogram.size(); ++k)
            out << fmt::format("{:.6g},{:.6g},{:.12g}\n", k * width, (k + 1) * width,
                               rates.histogram[k]);
    }
    {
        auto out = open(dir / "conversion_summary.csv");
        out << "directions,undefined_directions,zero_share,above_0.2_share\n";
        out << fmt::format("{},{},{:.12g},{:.12g}\n", rates.rates.size(),
                           rates.undefined_directions, rates.zero_share, rates.above_share);
    }
    const auto common = common_object_stats(data.social, data.interactions, cfg.seed_base);
    {
        auto out = open(dir / "common_objects.csv");
        out << "pairs,common_objects,count,proportion\n";
        auto emit = [&](const char *kind, const auto &table, std::size_t total) {
            for (const auto &[shared, count] : table)
                out << fmt::format("{},{},{},{:.12g}\n", kind, shared, count,
                                   static_cast<double>(count) / static_cast<double>(total));
        };
        emit("linked", common.linked, common.linked_pairs);
        emit("unlinked", common.unlinked, common.unlinked_pairs);
    }
    {
        auto out = open(dir / "common_neighbors.csv");
        out << "common_neighbors,pairs,mean_common_objects\n";
        for (const auto &[k, bin] : common.by_common_neighbors)
            out << fmt::format("{},{},{:.12g}\n", k, bin.pairs, bin.mean_common_objects);
    }
    {
        auto out = open(dir / "degree_ccdf.csv");
        out << "degree,ccdf\n";
        for (const auto &[k, p] : degree_ccdf(data.interactions))
            out << fmt::format("{},{:.12g}\n", k, p);
    }
    fmt::print("conversion rates: {} directions, h=0 share {:.4f}, h>0.2 share {:.4f}\n",
               rates.rates.size(), rates.zero_share, rates.above_share);
    fmt::print("linked pairs {}, sampled unlinked pairs {} -> {}\n", common.linked_pairs,
               common.unlinked_pairs, dir.string());
    return kOk;
}

int cmd_synth(const std::string &dir, const SyntheticConfig &sc) {
    const fs::path root(dir);
    fs::create_directories(root);
    const auto data = make_coupled_dataset(sc);
    write_dataset(data, root / "social.txt", root / "ratings.txt", sc.seed);
    std::ofstream cfg(root / "synthetic.ini");
    cfg << "[data]\nname = synthetic\nsocial = social.txt\nratings = ratings.txt\n\n"
           "[protocol]\nruns = 5\nlist_lengths = 20, 50\ncold_max = 5\ninactive_max = 6\n"
           "active_min = 25\n\n[sblo]\nlambda1 = 0.01, 0.1\nlambda2 = 0.01, 0.1\n\n"
           "[rwr]\ntheta1 = 1\ntheta2 = 1\ntheta3 = 0.5\n\n[output]\ndir = results\n";
    fmt::print("wrote {} users, {} objects to {}\n", data.social.user_count(),
               data.interactions.object_count(), root.string());
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Social/behavioral linear optimization recommender benchmark"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config, "INI configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--algo", opt.algos, "algorithm(s) to run")->delimiter(',');
        sub->add_option("--seed", opt.seed, "base seed");
        sub->add_option("--L", opt.lengths, "list length(s)")->delimiter(',');
        sub->add_option("--sigma", opt.sigmas, "rewiring fraction(s)")->delimiter(',');
        sub->add_option("--out", opt.out, "output directory");
        return sub;
    };
    std::function<int()> action;
    auto bind = [&](CLI::App *sub, std::function<int(const Options &)> fn) {
        sub->callback([&action, fn, &opt] { action = [fn, &opt] { return fn(opt); }; });
    };

    bind(common(app.add_subcommand("ingest", "validate the data and print statistics")),
         cmd_ingest);
    auto *split = common(app.add_subcommand("split", "write one train/probe split"));
    split->add_flag("--cold-start", opt.cold_start, "cold-start split instead of a random one");
    bind(split, cmd_split);
    auto *fit = common(app.add_subcommand("fit", "fit one algorithm and dump its matrices"));
    fit->add_option("--param", opt.params, "name=value parameter override");
    fit->add_flag("--cold-start", opt.cold_start, "fit on the cold-start split");
    bind(fit, cmd_fit);
    bind(common(app.add_subcommand("evaluate", "tune, evaluate and write results")),
         cmd_evaluate);
    bind(common(app.add_subcommand("grid", "grid search only")), cmd_grid);
    auto *curve = common(app.add_subcommand("rewire-curve", "social contribution curve"));
    curve->add_option("--param", opt.params, "SBLO name=value parameter override");
    bind(curve, cmd_rewire_curve);
    bind(common(app.add_subcommand("analyze", "conversion rates and common objects")),
         cmd_analyze);

    std::string synth_dir;
    SyntheticConfig synth_cfg;
    auto *synth = app.add_subcommand("synth", "write a synthetic coupled dataset");
    synth->add_option("dir", synth_dir, "output directory")->required();
    synth->add_option("--users", synth_cfg.users);
    synth->add_option("--objects", synth_cfg.objects);
    synth->add_option("--seed", synth_cfg.seed);
    synth->callback([&] { action = [&] { return cmd_synth(synth_dir, synth_cfg); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        return action();
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const ArgumentError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const SolverError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
}
