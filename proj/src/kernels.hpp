#pragma once

// Shared OpenMP kernels. Every kernel parallelizes over output rows only, so
// each entry is accumulated in a fixed order and results do not depend on the
// thread count.

#include "sblo/graph_data.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo::detail {

/// R = W B for dense row-major W (users x users) and the 0/1 matrix of `net`.
RowMatrix multiply_by_interactions(const RowMatrix &weights, const InteractionNetwork &net);

/// Salton (cosine) similarity of users over `net`: |O_i & O_j| / sqrt(k_i k_j),
/// 0 when either degree is 0.
RowMatrix user_salton(const InteractionNetwork &net);

/// Number of objects collected by both i and j, for every user pair.
RowMatrix user_cooccurrence(const InteractionNetwork &net);

} // namespace sblo::detail
