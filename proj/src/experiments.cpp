#include "sblo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <tuple>

#include <fmt/core.h>
#include <json.hpp>

#include "sblo/baselines.hpp"
#include "sblo/error.hpp"
#include "sblo/evaluation.hpp"
#include "sblo/factor_model.hpp"

namespace sblo {

ScoreMatrix fit_and_score(Algorithm algorithm, const ParameterPoint &point,
                          const SocialNetwork &social, const InteractionNetwork &train,
                          double tolerance, bool mask_trained) {
    auto scores = [&]() -> ScoreMatrix {
        switch (algorithm) {
        case Algorithm::Sblo: {
            const SbloParams params{parameter(point, "lambda1"), parameter(point, "lambda2"),
                                    tolerance};
            return score_sblo(solve_sblo(social, train, params), train, false);
        }
        case Algorithm::Blo:
            return score_sblo(solve_blo(train, parameter(point, "lambda2"), tolerance), train,
                              false);
        case Algorithm::Md: return score_md(train);
        case Algorithm::Hhp: return score_hhp(train, parameter(point, "lambda"));
        case Algorithm::Pd: return score_pd(train, parameter(point, "epsilon"));
        case Algorithm::CosraT: return score_cosra_t(social, train, parameter(point, "theta"));
        case Algorithm::Socmd: return score_socmd(social, train, parameter(point, "p"));
        case Algorithm::Rwr:
            return score_rwr(social, train, parameter(point, "theta1"),
                             parameter(point, "theta2"), parameter(point, "theta3"));
        case Algorithm::Grm: return score_grm(train);
        }
        throw ArgumentError("unknown algorithm");
    }();
    if (mask_trained)
        scores.mask_trained(train);
    return scores;
}

bool cold_start_applicable(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::Sblo:
    case Algorithm::Socmd:
    case Algorithm::Rwr:
    case Algorithm::Grm: return true;
    default: return false;
    }
}

const ParameterPoint &GridSearchResult::best_params() const {
    if (!best)
        throw DataError(fmt::format("no grid point succeeded for {} on class {}",
                                    to_string(algorithm), to_string(user_class)));
    return points.at(*best).params;
}

std::vector<GridSearchResult> grid_search(Algorithm algorithm, const ParameterGrid &grid,
                                          const SocialNetwork &social,
                                          std::span<const EvaluationSplit> splits,
                                          const UserClassLabels &labels,
                                          std::span<const UserClass> classes, double tolerance,
                                          bool mask_trained) {
    if (grid.size() == 0)
        throw ArgumentError("empty parameter grid");
    if (splits.empty())
        throw ArgumentError("grid search needs at least one split");
    std::vector<GridSearchResult> results(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        results[c].algorithm = algorithm;
        results[c].user_class = classes[c];
    }
    for (const auto &point : grid.points()) {
        std::vector<double> sums(classes.size(), 0.0);
        std::vector<bool> defined(classes.size(), true);
        std::string failure;
        for (const auto &split : splits) {
            try {
                const auto scores =
                    fit_and_score(algorithm, point, social, split.train, tolerance, mask_trained);
                for (std::size_t c = 0; c < classes.size(); ++c) {
                    const auto value = mean_aupr(scores, split, labels, classes[c]);
                    if (value)
                        sums[c] += *value;
                    else
                        defined[c] = false;
                }
            } catch (const std::exception &e) {
                failure = e.what();
                break;
            }
        }
        for (std::size_t c = 0; c < classes.size(); ++c) {
            GridPoint entry{point, std::nullopt, failure};
            if (failure.empty() && defined[c])
                entry.mean_aupr = sums[c] / static_cast<double>(splits.size());
            else if (failure.empty())
                entry.failure = "no evaluable users";
            auto &r = results[c];
            if (entry.mean_aupr &&
                (!r.best || *entry.mean_aupr > *r.points[*r.best].mean_aupr))
                r.best = r.points.size();
            r.points.push_back(std::move(entry));
        }
    }
    return results;
}

GridSearchResult grid_search(Algorithm algorithm, const ParameterGrid &grid,
                             const SocialNetwork &social, const EvaluationSplit &split,
                             const UserClassLabels &labels, UserClass user_class,
                             double tolerance, bool mask_trained) {
    return grid_search(algorithm, grid, social, std::span(&split, 1), labels,
                       std::span(&user_class, 1), tolerance, mask_trained)
        .front();
}

std::vector<std::uint64_t> run_seeds(const ExperimentConfig &config) {
    std::vector<std::uint64_t> seeds(config.runs);
    for (std::size_t k = 0; k < config.runs; ++k)
        seeds[k] = config.seed_base + k;
    return seeds;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Keeps cells ordered by (algorithm, class, L, seed) position in the config.
using CellKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;

struct CellTable {
    std::map<CellKey, CellResult> cells;

    void put(CellKey key, CellResult cell) { cells.insert_or_assign(key, std::move(cell)); }
};

CellResult summarize(const std::vector<const CellResult *> &per_seed) {
    CellResult out = *per_seed.front();
    out.seed.reset();
    out.report.reset();
    out.users_evaluated = 0.0;
    std::vector<const MetricReport *> ok;
    for (const auto *cell : per_seed)
        if (cell->report)
            ok.push_back(&*cell->report);
    if (ok.empty())
        return out;
    MetricReport mean = *ok.front();
    mean.seed = 0;
    mean.users_evaluated = 0;
    mean.aupr = mean.precision = mean.recall = mean.f_score = 0.0;
    mean.intra_similarity = mean.popularity = 0.0;
    bool all_hamming = true;
    double hamming = 0.0;
    double users = 0.0;
    for (const auto *r : ok) {
        mean.aupr += r->aupr;
        mean.precision += r->precision;
        mean.recall += r->recall;
        mean.f_score += r->f_score;
        mean.intra_similarity += r->intra_similarity;
        mean.popularity += r->popularity;
        users += static_cast<double>(r->users_evaluated);
        if (r->hamming)
            hamming += *r->hamming;
        else
            all_hamming = false;
    }
    const double n = static_cast<double>(ok.size());
    mean.aupr /= n;
    mean.precision /= n;
    mean.recall /= n;
    mean.f_score /= n;
    mean.intra_similarity /= n;
    mean.popularity /= n;
    mean.hamming = all_hamming ? std::optional(hamming / n) : std::nullopt;
    out.report = mean;
    out.users_evaluated = users / n;
    out.status = ok.size() == per_seed.size()
                     ? "ok"
                     : fmt::format("partial: {} of {} seeds", ok.size(), per_seed.size());
    return out;
}

} // namespace

RunRecord run_benchmark(const ExperimentConfig &config) {
    config.validate();
    const auto data = load_dataset(config.social_path, config.ratings_path,
                                   config.rating_threshold);
    return run_benchmark(config, data);
}

RunRecord run_benchmark(const ExperimentConfig &config, const Dataset &data) {
    RunRecord record;
    record.config_hash = config.hash();
    record.dataset = config.dataset_name;
    const auto total_start = Clock::now();

    const auto labels = label_users(data.interactions, config.thresholds);
    const auto seeds = run_seeds(config);

    std::vector<UserClass> random_classes;
    std::vector<std::size_t> random_class_pos;
    std::optional<std::size_t> cold_pos;
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
        if (config.classes[c] == UserClass::ColdStart) {
            cold_pos = c;
        } else {
            random_classes.push_back(config.classes[c]);
            random_class_pos.push_back(c);
        }
    }

    std::vector<EvaluationSplit> splits;
    std::vector<EvaluationSplit> tuning;
    if (!random_classes.empty()) {
        for (auto seed : seeds) {
            splits.push_back(random_split(data.interactions, config.probe_fraction, seed));
            record.empty_train_profiles.push_back(splits.back().empty_train_profiles());
            if (config.tuning == TuningMode::HeldOut)
                tuning.push_back(random_split(splits.back().train, config.probe_fraction,
                                              seed ^ 0x9e3779b97f4a7c15ULL));
        }
    }
    const auto &tuning_splits = config.tuning == TuningMode::HeldOut ? tuning : splits;
    std::optional<EvaluationSplit> cold_split;
    if (cold_pos)
        cold_split = cold_start_split(data.interactions, labels);

    CellTable table;
    auto cell = [&](Algorithm a, UserClass c, std::size_t length,
                    std::optional<std::uint64_t> seed, std::string status) {
        CellResult out;
        out.algorithm = a;
        out.user_class = c;
        out.list_length = length;
        out.seed = seed;
        out.status = std::move(status);
        return out;
    };

    // Fits once per distinct parameter point and fills the cells of `classes`.
    auto evaluate_group = [&](std::size_t alg_pos, Algorithm a, const ParameterPoint &point,
                              const EvaluationSplit &split, std::size_t seed_pos,
                              const std::vector<std::size_t> &class_positions) {
        std::vector<UserClass> group;
        for (auto pos : class_positions)
            group.push_back(config.classes[pos]);
        std::vector<MetricReport> reports;
        std::string failure;
        try {
            const auto scores = fit_and_score(a, point, data.social, split.train,
                                              config.solver_tolerance, config.mask_trained);
            reports = evaluate(scores, split, labels, group, config.list_lengths,
                               config.hamming_pairs);
        } catch (const std::exception &e) {
            failure = fmt::format("failed: {}", e.what());
        }
        for (auto pos : class_positions) {
            for (std::size_t l = 0; l < config.list_lengths.size(); ++l) {
                const auto length = config.list_lengths[l];
                auto out = cell(a, config.classes[pos], length, split.seed,
                                failure.empty() ? "empty-class" : failure);
                for (const auto &r : reports) {
                    if (r.user_class == config.classes[pos] && r.list_length == length) {
                        out.report = r;
                        out.users_evaluated = static_cast<double>(r.users_evaluated);
                        out.status = "ok";
                    }
                }
                table.put({alg_pos, pos, l, seed_pos}, std::move(out));
            }
        }
    };

    for (std::size_t alg_pos = 0; alg_pos < config.algorithms.size(); ++alg_pos) {
        const auto a = config.algorithms[alg_pos];
        const auto alg_start = Clock::now();
        const auto &grid = config.grid(a);
        const auto points = grid.points();

        // class position -> chosen point, or the reason there is none
        std::map<std::size_t, ParameterPoint> chosen;
        std::map<std::size_t, std::string> unavailable;
        auto choose = [&](const std::vector<GridSearchResult> &results,
                          const std::vector<std::size_t> &positions) {
            for (std::size_t k = 0; k < results.size(); ++k) {
                const auto &pts = results[k].points;
                const bool empty_class = std::all_of(pts.begin(), pts.end(), [](const auto &p) {
                    return p.failure == "no evaluable users";
                });
                if (results[k].best)
                    chosen[positions[k]] = results[k].best_params();
                else
                    unavailable[positions[k]] =
                        empty_class ? "empty-class" : "failed: no grid point succeeded";
                record.grids.push_back(results[k]);
            }
        };

        if (!random_classes.empty()) {
            if (points.size() == 1) {
                for (auto pos : random_class_pos)
                    chosen[pos] = points.front();
            } else {
                choose(grid_search(a, grid, data.social, tuning_splits, labels, random_classes,
                                   config.solver_tolerance, config.mask_trained),
                       random_class_pos);
            }
        }
        if (cold_pos && cold_start_applicable(a)) {
            if (points.size() == 1) {
                chosen[*cold_pos] = points.front();
            } else {
                const UserClass cold = UserClass::ColdStart;
                choose(grid_search(a, grid, data.social, std::span(&*cold_split, 1), labels,
                                   std::span(&cold, 1), config.solver_tolerance,
                                   config.mask_trained),
                       {*cold_pos});
            }
        }

        for (std::size_t s = 0; s < splits.size(); ++s) {
            // Classes sharing a tuned point share one fit.
            std::vector<std::pair<ParameterPoint, std::vector<std::size_t>>> groups;
            for (auto pos : random_class_pos) {
                if (auto it = unavailable.find(pos); it != unavailable.end()) {
                    for (std::size_t l = 0; l < config.list_lengths.size(); ++l)
                        table.put({alg_pos, pos, l, s},
                                  cell(a, config.classes[pos], config.list_lengths[l],
                                       splits[s].seed, it->second));
                    continue;
                }
                auto g = std::find_if(groups.begin(), groups.end(),
                                      [&](const auto &entry) { return entry.first == chosen[pos]; });
                if (g == groups.end())
                    groups.push_back({chosen[pos], {pos}});
                else
                    g->second.push_back(pos);
            }
            for (const auto &[point, positions] : groups)
                evaluate_group(alg_pos, a, point, splits[s], s, positions);
        }

        if (cold_pos) {
            if (!cold_start_applicable(a)) {
                for (std::size_t l = 0; l < config.list_lengths.size(); ++l)
                    table.put({alg_pos, *cold_pos, l, 0},
                              cell(a, UserClass::ColdStart, config.list_lengths[l],
                                   cold_split->seed, "not-applicable"));
            } else if (auto it = unavailable.find(*cold_pos); it != unavailable.end()) {
                for (std::size_t l = 0; l < config.list_lengths.size(); ++l)
                    table.put({alg_pos, *cold_pos, l, 0},
                              cell(a, UserClass::ColdStart, config.list_lengths[l],
                                   cold_split->seed, it->second));
            } else {
                evaluate_group(alg_pos, a, chosen[*cold_pos], *cold_split, 0, {*cold_pos});
            }
        }
        record.timings.emplace_back(std::string(to_string(a)), seconds_since(alg_start));
    }

    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<const CellResult *>>
        grouped;
    for (const auto &[key, value] : table.cells) {
        record.runs.push_back(value);
        grouped[{std::get<0>(key), std::get<1>(key), std::get<2>(key)}].push_back(&value);
    }
    for (const auto &[key, per_seed] : grouped)
        record.summary.push_back(summarize(per_seed));
    record.timings.emplace_back("total", seconds_since(total_start));
    return record;
}

namespace {

std::string number(double v) { return fmt::format("{:.12g}", v); }

const char *kCsvHeader = "dataset,algorithm,class,L,seed,status,AUPR,Pre,Rec,F,I,H,Pop,nUsers\n";

std::string csv_field(const std::string &text) {
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + '"';
}

std::string csv_row(const std::string &dataset, const CellResult &c) {
    std::string row = fmt::format("{},{},{},{},{},{}", csv_field(dataset), to_string(c.algorithm),
                                  to_string(c.user_class), c.list_length,
                                  c.seed ? std::to_string(*c.seed) : std::string("mean"),
                                  csv_field(c.status));
    if (!c.report)
        return row + ",,,,,,,,\n";
    const auto &r = *c.report;
    return row + fmt::format(",{},{},{},{},{},{},{},{}\n", number(r.aupr), number(r.precision),
                             number(r.recall), number(r.f_score), number(r.intra_similarity),
                             r.hamming ? number(*r.hamming) : std::string(),
                             number(r.popularity), number(c.users_evaluated));
}

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out)
        throw DataError("write failed: " + path.string());
}

} // namespace

void write_grid_table(const std::vector<GridSearchResult> &grids,
                      const std::filesystem::path &path) {
    auto out = open_output(path);
    out << "algorithm,class,point,params,mean_AUPR,best,failure\n";
    for (const auto &g : grids) {
        for (std::size_t k = 0; k < g.points.size(); ++k) {
            const auto &p = g.points[k];
            out << fmt::format("{},{},{},{},{},{},{}\n", to_string(g.algorithm),
                               to_string(g.user_class), k, csv_field(to_string(p.params)),
                               p.mean_aupr ? number(*p.mean_aupr) : std::string(),
                               g.best == k ? 1 : 0, csv_field(p.failure));
        }
    }
    finish(out, path);
}

void emit_results(const RunRecord &record, const ExperimentConfig &config,
                  const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));

    auto write_cells = [&](const std::filesystem::path &path, const std::vector<CellResult> &cells) {
        auto out = open_output(path);
        out << kCsvHeader;
        for (const auto &c : cells)
            out << csv_row(record.dataset, c);
        finish(out, path);
    };
    write_cells(dir / "results.csv", record.summary);
    write_cells(dir / "runs.csv", record.runs);

    write_grid_table(record.grids, dir / "grid.csv");
    {
        const auto path = dir / "config.ini";
        auto out = open_output(path);
        out << config.canonical();
        finish(out, path);
    }
    {
        nlohmann::ordered_json meta;
        meta["config_hash"] = fmt::format("{:016x}", record.config_hash);
        meta["dataset"] = record.dataset;
        meta["seeds"] = run_seeds(config);
        meta["empty_train_profiles"] = record.empty_train_profiles;
        auto &chosen = meta["chosen_parameters"];
        chosen = nlohmann::ordered_json::object();
        for (const auto &g : record.grids) {
            auto &entry = chosen[std::string(to_string(g.algorithm))];
            entry[std::string(to_string(g.user_class))] =
                g.best ? nlohmann::ordered_json(to_string(g.best_params())) : nullptr;
        }
        auto &timings = meta["timings_seconds"];
        timings = nlohmann::ordered_json::object();
        for (const auto &[name, secs] : record.timings)
            timings[name] = secs;
        const auto path = dir / "metadata.json";
        auto out = open_output(path);
        out << meta.dump(2) << '\n';
        finish(out, path);
    }
}

} // namespace sblo
