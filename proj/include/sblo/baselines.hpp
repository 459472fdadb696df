#pragma once

#include "sblo/graph_data.hpp"
#include "sblo/score_matrix.hpp"

namespace sblo {

/// Tunable parameters of the comparison recommenders.
struct BaselineParams {
    double hhp_lambda = 0.5;   ///< HHP hybridization, 1 = mass diffusion, 0 = heat conduction
    double pd_epsilon = -0.8;  ///< PD exponent on the receiving object's degree
    double cosra_theta = 0.5;  ///< CosRA+T exponent applied to socially linked pairs
    double socmd_p = 0.5;      ///< SocMD probability of diffusing over interactions
    double rwr_theta1 = 1.0;   ///< RWR exponent on the social similarity
    double rwr_theta2 = 1.0;   ///< RWR exponent on the preference similarity
    double rwr_theta3 = 0.5;   ///< walk continuation probability, in (0,1)

    void validate() const;
};

// All scorers return raw, unmasked scores. Degree-zero nodes follow the
// 0/0 := 0 convention: they neither send nor receive resource.

/// Mass diffusion (ProbS).
ScoreMatrix score_md(const InteractionNetwork &train);

/// Heat conduction / mass diffusion hybrid; lambda in [0,1], lambda = 1 is MD.
ScoreMatrix score_hhp(const InteractionNetwork &train, double lambda);

/// Preferential diffusion. The per-user normalizer is sum_r b_lr k_r^epsilon
/// over the user's collected objects; epsilon = 0 is MD.
ScoreMatrix score_pd(const InteractionNetwork &train, double epsilon);

/// Global ranking: every user's row is the object-degree vector.
ScoreMatrix score_grm(const InteractionNetwork &train);

/// r^A: entry (i, j) is the j-th component of the restart-walk vector
/// (1 - theta3)(I - theta3 T)^{-1} e_i with T_ij = a_ij / k^A_i.
RowMatrix rwr_social_similarity(const SocialNetwork &social, double theta3);

/// User-based CF with weights (r^A_ij)^theta1 (r^B_ij)^theta2, r^B the
/// Salton similarity over `train`. Zero similarities stay zero for any exponent.
ScoreMatrix score_rwr(const SocialNetwork &social, const InteractionNetwork &train, double theta1,
                      double theta2, double theta3);

/// CosRA+T: the resource t_ij passed between socially linked users is raised
/// to theta. Pairs with t_ij = 0 contribute nothing.
ScoreMatrix score_cosra_t(const SocialNetwork &social, const InteractionNetwork &train,
                          double theta);

/// CosRA+T without the social adjustment.
ScoreMatrix score_cosra(const InteractionNetwork &train);

/// SocMD: mixture of interaction diffusion (weight p) and diffusion over
/// social ties followed by one interaction hop (weight 1 - p).
ScoreMatrix score_socmd(const SocialNetwork &social, const InteractionNetwork &train, double p);

} // namespace sblo
