#pragma once

// Serial, formula-by-formula scorers on dense 0/1 matrices. They exist to
// check and benchmark the parallel kernels and are deliberately naive.

#include "sblo/graph_data.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo::reference {

RowMatrix dense_interactions(const InteractionNetwork &net);
RowMatrix dense_social(const SocialNetwork &net);

RowMatrix md(const RowMatrix &b);
RowMatrix hhp(const RowMatrix &b, double lambda);
RowMatrix pd(const RowMatrix &b, double epsilon);
RowMatrix grm(const RowMatrix &b);
RowMatrix cosra_t(const RowMatrix &a, const RowMatrix &b, double theta);
RowMatrix socmd(const RowMatrix &a, const RowMatrix &b, double p);

/// (1 - theta3)(I - theta3 T)^{-1} by Gauss-Jordan elimination; row i is the
/// walk vector of user i.
RowMatrix restart_walk(const RowMatrix &a, double theta3);
RowMatrix user_salton(const RowMatrix &b);
RowMatrix rwr(const RowMatrix &a, const RowMatrix &b, double theta1, double theta2, double theta3);

/// M = lambda1 A A + lambda2 B B^T, triple loops.
RowMatrix coupling(const RowMatrix &a, const RowMatrix &b, double lambda1, double lambda2);
/// R = S B, triple loop.
RowMatrix multiply(const RowMatrix &s, const RowMatrix &b);

} // namespace sblo::reference
