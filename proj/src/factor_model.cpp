#include "sblo/factor_model.hpp"

#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>
#include <fmt/core.h>

#include "kernels.hpp"
#include "sblo/error.hpp"

namespace sblo {

void SbloParams::validate() const {
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
        throw ArgumentError(fmt::format("lambda1 and lambda2 must be nonnegative, got {} and {}",
                                        lambda1, lambda2));
    if (lambda1 == 0.0 && lambda2 == 0.0)
        throw ArgumentError("lambda1 and lambda2 cannot both be zero");
    if (!(tolerance > 0.0))
        throw ArgumentError("solver tolerance must be positive");
}

void ScoreMatrix::mask_trained(const InteractionNetwork &train) {
    if (train.user_count() != user_count() || train.object_count() != object_count())
        throw ConsistencyError(fmt::format("cannot mask a {}x{} score matrix with a {}x{} network",
                                           user_count(), object_count(), train.user_count(),
                                           train.object_count()));
    for (Index u = 0; u < train.user_count(); ++u)
        for (Index o : train.items(u))
            values_(u, o) = kExcluded;
    masked_ = true;
}

DenseMatrix coupling_matrix(const SocialNetwork &social, const InteractionNetwork &interactions,
                            double lambda1, double lambda2) {
    const auto m = static_cast<Eigen::Index>(interactions.user_count());
    DenseMatrix coupling = DenseMatrix::Zero(m, m);
    if (lambda1 != 0.0) {
        if (social.user_count() != interactions.user_count())
            throw ConsistencyError(fmt::format("social network has {} users, interactions have {}",
                                               social.user_count(), interactions.user_count()));
        // A is symmetric, so A A^T = A^2.
        const SparseMatrix a = social.adjacency_matrix();
        const SparseMatrix a2 = (a * a).pruned();
        coupling += lambda1 * DenseMatrix(a2);
    }
    if (lambda2 != 0.0) {
        const SparseMatrix b = interactions.biadjacency_matrix();
        const SparseMatrix bbt = (b * SparseMatrix(b.transpose())).pruned();
        coupling += lambda2 * DenseMatrix(bbt);
    }
    return coupling;
}

double objective_value(const DenseMatrix &weights, const SocialNetwork &social,
                       const InteractionNetwork &interactions, const SbloParams &params) {
    const auto m = static_cast<Eigen::Index>(interactions.user_count());
    if (weights.rows() != m || weights.cols() != m)
        throw ArgumentError(fmt::format("factor matrix is {}x{}, expected {}x{}", weights.rows(),
                                        weights.cols(), m, m));
    if (params.lambda1 != 0.0 && social.user_count() != interactions.user_count())
        throw ArgumentError("social and interaction networks have different user counts");
    const DenseMatrix coupling =
        coupling_matrix(social, interactions, params.lambda1, params.lambda2);
    // |S|^2 + tr(M) - 2 <S, M> + <S, S M>
    return weights.squaredNorm() + coupling.trace() - 2.0 * weights.cwiseProduct(coupling).sum() +
           weights.cwiseProduct(weights * coupling).sum();
}

double stationarity_residual(const DenseMatrix &weights, const DenseMatrix &coupling) {
    const double scale = coupling.norm();
    if (scale == 0.0)
        return weights.norm();
    const DenseMatrix lhs = weights * coupling + weights;
    return (lhs - coupling).norm() / scale;
}

namespace {

// Residual along a few fixed random directions: |S (M+I) v - M v| / |M v|.
// Costs O(m^2) per direction instead of the O(m^3) full check.
double probe_residual(const DenseMatrix &weights, const DenseMatrix &coupling) {
    const auto m = coupling.rows();
    std::mt19937_64 rng(0x5b10u);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int probe = 0; probe < 3; ++probe) {
        Eigen::VectorXd v(m);
        for (Eigen::Index i = 0; i < m; ++i)
            v[i] = normal(rng);
        const Eigen::VectorXd mv = coupling * v;
        const double denom = mv.norm();
        const Eigen::VectorXd lhs = weights * (mv + v);
        const double num = (lhs - mv).norm();
        worst = std::max(worst, denom == 0.0 ? num : num / denom);
    }
    return worst;
}

ImplicitFactorMatrix solve_coupled(DenseMatrix coupling, const SbloParams &params,
                                   std::uint64_t fingerprint) {
    const auto m = coupling.rows();
    DenseMatrix shifted = coupling;
    shifted.diagonal().array() += 1.0;
    Eigen::LLT<DenseMatrix> llt(shifted);
    if (llt.info() != Eigen::Success)
        throw SolverError("Cholesky factorization of M + I failed", std::nan(""));
    // (M + I) X = M gives X = S^T.
    DenseMatrix weights = llt.solve(coupling).transpose();
    if (!weights.allFinite())
        throw SolverError("non-finite entries in the solution", std::nan(""));
    const double residual = m == 0 ? 0.0 : probe_residual(weights, coupling);
    if (!(residual <= params.tolerance))
        throw SolverError(fmt::format("relative residual {:.3e} exceeds tolerance {:.3e}", residual,
                                      params.tolerance),
                          residual);
    return ImplicitFactorMatrix(std::move(weights), params, fingerprint, residual);
}

} // namespace

ImplicitFactorMatrix solve_sblo(const SocialNetwork &social, const InteractionNetwork &interactions,
                                const SbloParams &params) {
    params.validate();
    return solve_coupled(coupling_matrix(social, interactions, params.lambda1, params.lambda2),
                         params, fingerprint(interactions));
}

ImplicitFactorMatrix solve_blo(const InteractionNetwork &interactions, double lambda2,
                               double tolerance) {
    if (!(lambda2 > 0.0))
        throw ArgumentError(fmt::format("lambda2 must be positive, got {}", lambda2));
    return solve_sblo(SocialNetwork(interactions.user_count(), {}), interactions,
                      SbloParams{.lambda1 = 0.0, .lambda2 = lambda2, .tolerance = tolerance});
}

ScoreMatrix score_sblo(const ImplicitFactorMatrix &factors, const InteractionNetwork &interactions,
                       bool mask_trained) {
    if (factors.train_fingerprint() != fingerprint(interactions))
        throw ConsistencyError("factor matrix was fitted on a different interaction network");
    const RowMatrix weights = factors.matrix();
    ScoreMatrix scores(detail::multiply_by_interactions(weights, interactions));
    if (mask_trained)
        scores.mask_trained(interactions);
    return scores;
}

DenseMatrix social_projection(const ImplicitFactorMatrix &factors, const SocialNetwork &social) {
    if (social.user_count() != factors.user_count())
        throw ConsistencyError("social network and factor matrix disagree on the user count");
    const SparseMatrix a = social.adjacency_matrix();
    return factors.matrix() * a;
}

} // namespace sblo
