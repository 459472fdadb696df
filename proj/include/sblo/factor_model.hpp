#pragma once

#include <cstdint>

#include "sblo/graph_data.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo {

struct SbloParams {
    double lambda1 = 0.0; ///< social fit weight
    double lambda2 = 0.0; ///< interaction fit weight
    /// Bound on the relative residual |S(M+I) - M| / |M| accepted from the solve.
    double tolerance = 1e-10;

    void validate() const;
};

/// Learned m x m user-user weights S with the parameters and training
/// network they came from.
class ImplicitFactorMatrix {
public:
    ImplicitFactorMatrix(DenseMatrix weights, SbloParams params, std::uint64_t train_fingerprint,
                         double residual = 0.0)
        : weights_(std::move(weights)), params_(params), train_fingerprint_(train_fingerprint),
          residual_(residual) {}

    const DenseMatrix &matrix() const noexcept { return weights_; }
    const SbloParams &params() const noexcept { return params_; }
    std::uint64_t train_fingerprint() const noexcept { return train_fingerprint_; }
    /// Probe residual measured after the solve.
    double residual() const noexcept { return residual_; }
    std::size_t user_count() const noexcept { return static_cast<std::size_t>(weights_.rows()); }

private:
    DenseMatrix weights_;
    SbloParams params_;
    std::uint64_t train_fingerprint_;
    double residual_;
};

/// M = lambda1 * A A^T + lambda2 * B B^T, assembled from sparse products.
DenseMatrix coupling_matrix(const SocialNetwork &social, const InteractionNetwork &interactions,
                            double lambda1, double lambda2);

/// |S|_F^2 + lambda1 |A - SA|_F^2 + lambda2 |B - SB|_F^2, evaluated through
/// traces of M so that A and B are never multiplied by S densely.
double objective_value(const DenseMatrix &weights, const SocialNetwork &social,
                       const InteractionNetwork &interactions, const SbloParams &params);

/// |S(M + I) - M|_F / |M|_F (0 when M = 0).
double stationarity_residual(const DenseMatrix &weights, const DenseMatrix &coupling);

/// S* = M (M + I)^{-1}, computed as a Cholesky solve of (M + I) S^T = M.
/// Throws SolverError if the factorization fails or the residual exceeds
/// params.tolerance.
ImplicitFactorMatrix solve_sblo(const SocialNetwork &social, const InteractionNetwork &interactions,
                                const SbloParams &params);

/// Social-free variant: S = lambda2 B B^T (lambda2 B B^T + I)^{-1}.
ImplicitFactorMatrix solve_blo(const InteractionNetwork &interactions, double lambda2,
                               double tolerance = 1e-10);

/// R = S B. `interactions` must be the network S was fitted on.
ScoreMatrix score_sblo(const ImplicitFactorMatrix &factors, const InteractionNetwork &interactions,
                       bool mask_trained = true);

/// P = S A, the reconstructed social scores. Diagnostic only.
DenseMatrix social_projection(const ImplicitFactorMatrix &factors, const SocialNetwork &social);

} // namespace sblo
