#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sblo/factor_model.hpp"
#include "sblo/graph_data.hpp"
#include "sblo/protocol.hpp"

namespace sblo {

/// Share of `to`'s collected objects that `from` also collected:
/// |O_to & O_from| / |O_to|. Undefined (throws) when O_to is empty.
double conversion_rate(const InteractionNetwork &interactions, Index from, Index to);

struct ConversionRateTable {
    struct Entry {
        Index from;
        Index to;
        double rate;
    };
    std::vector<Entry> rates;              ///< both directions of every social edge, where defined
    std::size_t undefined_directions = 0;  ///< directions whose receiving profile is empty
    std::vector<double> histogram;         ///< proportion per bin; equal-width bins over [0,1]
    double zero_share = 0.0;               ///< proportion with h = 0
    double above_share = 0.0;              ///< proportion with h > 0.2
};

ConversionRateTable conversion_rates(const SocialNetwork &social,
                                     const InteractionNetwork &interactions,
                                     std::size_t bins = 20);

struct CommonObjectStats {
    /// number of shared objects -> number of pairs
    std::map<std::size_t, std::size_t> linked;
    std::map<std::size_t, std::size_t> unlinked;
    std::size_t linked_pairs = 0;
    std::size_t unlinked_pairs = 0;

    struct NeighborBin {
        std::size_t pairs = 0;
        double mean_common_objects = 0.0;
    };
    /// number of common social neighbours -> pairs and mean shared objects,
    /// over the linked pairs and the sampled unlinked pairs together.
    std::map<std::size_t, NeighborBin> by_common_neighbors;
};

/// Shared-object counts for every linked pair and for a seeded uniform sample
/// of unlinked pairs of the same size (all unlinked pairs if there are fewer).
CommonObjectStats common_object_stats(const SocialNetwork &social,
                                      const InteractionNetwork &interactions,
                                      std::uint64_t seed = 0);

struct RewiringResult {
    SocialNetwork network;
    double sigma = 0.0;
    double achieved_fraction = 0.0; ///< edges absent from the original, over |E|
    std::size_t swap_attempts = 0;
    std::size_t swaps = 0;
    std::uint64_t seed = 0;
    bool target_reached = true;
};

/// Degree-preserving rewiring: random edge pairs (a,b),(c,d) become
/// (a,d),(c,b) unless that creates a self-loop or a duplicate, until at least
/// ceil(sigma |E|) edges differ from the original or
/// max_attempts_factor * |E| attempts are spent (then a warning is logged and
/// target_reached is false).
RewiringResult rewire_social(const SocialNetwork &social, double sigma, std::uint64_t seed,
                             std::size_t max_attempts_factor = 100);

struct ContributionPoint {
    double sigma = 0.0;
    double aupr_mean = 0.0;
    double aupr_std = 0.0;
    double improvement_over_blo = 0.0; ///< aupr_mean - BLO AUPR
    double achieved_fraction = 0.0;    ///< mean over seeds
};

struct ContributionCurve {
    double blo_aupr = 0.0;
    std::vector<ContributionPoint> points;
};

/// For each sigma, rewires the social network once per seed, refits SBLO on
/// split.train and averages the all-users AUPR over seeds. sigma = 0 uses the
/// network unchanged.
ContributionCurve social_contribution_curve(const SocialNetwork &social,
                                            const EvaluationSplit &split,
                                            const SbloParams &params,
                                            std::span<const double> sigmas,
                                            std::span<const std::uint64_t> seeds,
                                            std::size_t max_attempts_factor = 100);

} // namespace sblo
