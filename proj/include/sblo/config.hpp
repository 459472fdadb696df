#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sblo/protocol.hpp"

namespace sblo {

enum class Algorithm { Sblo, Blo, Md, Hhp, Pd, CosraT, Socmd, Rwr, Grm };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::Md,     Algorithm::Hhp, Algorithm::Pd,   Algorithm::CosraT, Algorithm::Socmd,
    Algorithm::Rwr,    Algorithm::Grm, Algorithm::Blo,  Algorithm::Sblo};

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Named parameter values for one fit, in declaration order.
using ParameterPoint = std::vector<std::pair<std::string, double>>;

std::string to_string(const ParameterPoint &point);
double parameter(const ParameterPoint &point, std::string_view name);

/// Cartesian product of per-parameter value lists. The last parameter varies fastest.
struct ParameterGrid {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;

    std::vector<ParameterPoint> points() const;
    std::size_t size() const;
};

/// Parameter names and default grids per algorithm (empty for GRM and MD).
ParameterGrid default_grid(Algorithm a);

enum class TuningMode { OnTest, HeldOut };

struct ExperimentConfig {
    // [data]
    std::string dataset_name = "dataset";
    std::filesystem::path social_path;
    std::filesystem::path ratings_path;
    double rating_threshold = 3.0;

    // [protocol]
    double probe_fraction = 0.1;
    std::size_t runs = 20;
    std::uint64_t seed_base = 1;
    std::vector<std::size_t> list_lengths{50};
    std::vector<UserClass> classes{UserClass::All, UserClass::Active, UserClass::Inactive,
                                   UserClass::ColdStart};
    ClassThresholds thresholds;
    bool mask_trained = true;
    TuningMode tuning = TuningMode::OnTest;
    std::optional<std::size_t> hamming_pairs;

    // [algorithms] and one section per tunable algorithm
    std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
    std::map<Algorithm, ParameterGrid> grids;
    double solver_tolerance = 1e-10;

    // [analysis]
    std::vector<double> sigmas{0.0, 0.25, 0.5, 0.75, 1.0};
    std::size_t rewire_seeds = 5;
    std::size_t max_attempts_factor = 100;
    std::size_t histogram_bins = 20;

    // [output]
    std::filesystem::path output_dir = "results";

    /// Grid for `a`: the configured one, else the default.
    const ParameterGrid &grid(Algorithm a) const;

    /// Checks value ranges and that the data files exist.
    void validate() const;

    /// Normalized INI text covering every field; the config hash is computed over it.
    std::string canonical() const;
    std::uint64_t hash() const;
};

/// Parses INI text. Relative paths resolve against `base_dir`. Unknown
/// sections or keys are errors.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {});

ExperimentConfig load_config(const std::filesystem::path &path);

} // namespace sblo
