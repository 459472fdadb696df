#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "sblo/graph_data.hpp"

namespace sblo {

/// Train/probe partition of an interaction network. Both halves live on the
/// same user and object universe as the source network.
struct EvaluationSplit {
    InteractionNetwork train;
    InteractionNetwork probe;
    std::uint64_t seed = 0;
    double probe_fraction = 0.0;
    bool cold_start = false;

    /// Users left with no training interactions.
    std::size_t empty_train_profiles() const;
};

/// Moves round(probe_fraction * |E|) uniformly chosen edges into the probe
/// set. Deterministic for a given seed.
EvaluationSplit random_split(const InteractionNetwork &interactions, double probe_fraction,
                             std::uint64_t seed);

enum class UserClass { All, Active, Inactive, ColdStart };

inline constexpr std::array<UserClass, 4> kAllUserClasses{UserClass::All, UserClass::Active,
                                                          UserClass::Inactive,
                                                          UserClass::ColdStart};

std::string_view to_string(UserClass c);
std::optional<UserClass> parse_user_class(std::string_view name);

struct ClassThresholds {
    std::size_t cold_max = 3;
    std::size_t inactive_max = 4;
    std::size_t active_min = 30;
};

/// Degree-based user classes. Membership is not exclusive: with
/// cold_max <= inactive_max every cold-start user is also inactive.
class UserClassLabels {
public:
    UserClassLabels(std::vector<std::size_t> degrees, ClassThresholds thresholds);

    bool contains(UserClass c, Index user) const;
    /// Fraction of all users in class `c`.
    double fraction(UserClass c) const;
    std::vector<Index> members(UserClass c) const;

    const ClassThresholds &thresholds() const noexcept { return thresholds_; }
    std::size_t user_count() const noexcept { return degrees_.size(); }
    std::size_t degree(Index user) const { return degrees_.at(user); }

private:
    std::vector<std::size_t> degrees_;
    ClassThresholds thresholds_;
};

/// Requires cold_max <= inactive_max < active_min.
UserClassLabels label_users(const InteractionNetwork &interactions, ClassThresholds thresholds);

/// Every interaction of a cold-start user goes to the probe set.
EvaluationSplit cold_start_split(const InteractionNetwork &interactions,
                                 const UserClassLabels &labels);

/// (k, P(user degree >= k)) for every observed degree k, ascending in k.
std::vector<std::pair<std::size_t, double>> degree_ccdf(const InteractionNetwork &interactions);

/// Writes train.txt, probe.txt and split.meta into `dir`, plus the id maps.
void export_split(const std::filesystem::path &dir, const EvaluationSplit &split,
                  const IdIndex &users, const IdIndex &objects,
                  const std::optional<ClassThresholds> &thresholds = std::nullopt);

} // namespace sblo
