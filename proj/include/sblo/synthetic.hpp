#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "sblo/graph_data.hpp"

namespace sblo {

/// Community-structured data in which the social network is derived from
/// co-collection overlap in the full interaction network, so social ties
/// carry information about held-out interactions.
struct SyntheticConfig {
    std::size_t users = 300;
    std::size_t objects = 400;
    std::size_t communities = 6;
    std::size_t min_degree = 4;
    std::size_t max_degree = 40;
    double in_community = 0.85;      ///< chance a pick comes from the user's community
    std::size_t ties_per_user = 6;   ///< links to the most-overlapping users
    double random_tie_share = 0.05;  ///< extra uniformly random links, relative to |E|
    std::uint64_t seed = 1;
};

Dataset make_coupled_dataset(const SyntheticConfig &config);

/// Writes the dataset as a social edge list and a rating file. Interactions
/// get ratings 3-5; a matching number of sub-threshold (1-2) ratings on
/// non-interacting pairs is mixed in.
void write_dataset(const Dataset &data, const std::filesystem::path &social_path,
                   const std::filesystem::path &ratings_path, std::uint64_t seed = 1);

} // namespace sblo
