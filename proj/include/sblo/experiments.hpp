#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sblo/config.hpp"
#include "sblo/graph_data.hpp"
#include "sblo/metrics.hpp"
#include "sblo/protocol.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo {

/// Fits `algorithm` on `train` with `point` and returns its scores, masked
/// when `mask_trained` is set.
ScoreMatrix fit_and_score(Algorithm algorithm, const ParameterPoint &point,
                          const SocialNetwork &social, const InteractionNetwork &train,
                          double tolerance = 1e-10, bool mask_trained = true);

/// Whether the algorithm can rank anything for a user with no training
/// interactions.
bool cold_start_applicable(Algorithm algorithm);

struct GridPoint {
    ParameterPoint params;
    std::optional<double> mean_aupr; ///< empty when the fit failed or no user was evaluable
    std::string failure;
};

struct GridSearchResult {
    Algorithm algorithm = Algorithm::Md;
    UserClass user_class = UserClass::All;
    std::vector<GridPoint> points;
    std::optional<std::size_t> best; ///< first point with the highest mean AUPR

    const ParameterPoint &best_params() const;
};

/// Mean AUPR of every grid point, averaged over `splits`, for each class in
/// `classes`. One fit per (point, split) serves all classes. Returns one
/// result per class, in order.
std::vector<GridSearchResult> grid_search(Algorithm algorithm, const ParameterGrid &grid,
                                          const SocialNetwork &social,
                                          std::span<const EvaluationSplit> splits,
                                          const UserClassLabels &labels,
                                          std::span<const UserClass> classes,
                                          double tolerance = 1e-10, bool mask_trained = true);

GridSearchResult grid_search(Algorithm algorithm, const ParameterGrid &grid,
                             const SocialNetwork &social, const EvaluationSplit &split,
                             const UserClassLabels &labels, UserClass user_class,
                             double tolerance = 1e-10, bool mask_trained = true);

struct CellResult {
    Algorithm algorithm = Algorithm::Md;
    UserClass user_class = UserClass::All;
    std::size_t list_length = 0;
    std::optional<std::uint64_t> seed; ///< empty on rows averaged over seeds
    std::string status;                ///< "ok", "not-applicable", "empty-class" or "failed: ..."
    std::optional<MetricReport> report;
    double users_evaluated = 0.0;      ///< mean over seeds on averaged rows
};

struct RunRecord {
    std::uint64_t config_hash = 0;
    std::string dataset;
    std::vector<CellResult> runs;    ///< per (algorithm, class, L, seed)
    std::vector<CellResult> summary; ///< per (algorithm, class, L), means over seeds
    std::vector<GridSearchResult> grids;
    std::vector<std::pair<std::string, double>> timings; ///< seconds, not part of the CSVs
    std::vector<std::size_t> empty_train_profiles;       ///< per random split
};

/// Loads the data, tunes each algorithm per class and evaluates it on every
/// split. Failures are recorded in the affected cells and the run goes on.
RunRecord run_benchmark(const ExperimentConfig &config);
RunRecord run_benchmark(const ExperimentConfig &config, const Dataset &data);

/// Writes results.csv, runs.csv, grid.csv, config.ini and metadata.json into
/// `dir`. Everything except the timings in metadata.json is byte-stable.
void emit_results(const RunRecord &record, const ExperimentConfig &config,
                  const std::filesystem::path &dir);

/// grid.csv: one row per (algorithm, class, grid point).
void write_grid_table(const std::vector<GridSearchResult> &grids,
                      const std::filesystem::path &path);

/// The per-run seeds: seed_base, seed_base + 1, ...
std::vector<std::uint64_t> run_seeds(const ExperimentConfig &config);

} // namespace sblo
