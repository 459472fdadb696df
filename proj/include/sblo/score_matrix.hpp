#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include <Eigen/Core>

#include "sblo/graph_data.hpp"

namespace sblo {

using DenseMatrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense users x objects recommendation scores. A masked entry holds
/// kExcluded and never enters a ranking.
class ScoreMatrix {
public:
    static constexpr double kExcluded = -std::numeric_limits<double>::infinity();

    ScoreMatrix() = default;
    explicit ScoreMatrix(RowMatrix values) : values_(std::move(values)) {}

    std::size_t user_count() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t object_count() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    std::span<const double> row(Index user) const {
        return {values_.data() + static_cast<std::size_t>(user) * object_count(), object_count()};
    }
    double operator()(Index user, Index object) const { return values_(user, object); }
    const RowMatrix &values() const noexcept { return values_; }

    bool masked() const noexcept { return masked_; }
    /// Excludes every training interaction of each user from ranking.
    void mask_trained(const InteractionNetwork &train);

private:
    RowMatrix values_;
    bool masked_ = false;
};

} // namespace sblo
