#include "sblo/baselines.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <vector>

#include <Eigen/LU>
#include <fmt/core.h>

#include "kernels.hpp"
#include "sblo/error.hpp"

namespace sblo {

void BaselineParams::validate() const {
    if (!(hhp_lambda >= 0.0 && hhp_lambda <= 1.0))
        throw ArgumentError(fmt::format("HHP lambda must lie in [0,1], got {}", hhp_lambda));
    if (!(socmd_p >= 0.0 && socmd_p <= 1.0))
        throw ArgumentError(fmt::format("SocMD p must lie in [0,1], got {}", socmd_p));
    if (!(rwr_theta3 > 0.0 && rwr_theta3 < 1.0))
        throw ArgumentError(fmt::format("RWR theta3 must lie in (0,1), got {}", rwr_theta3));
    if (!(rwr_theta1 >= 0.0) || !(rwr_theta2 >= 0.0))
        throw ArgumentError("RWR theta1 and theta2 must be nonnegative");
    if (!std::isfinite(pd_epsilon) || !std::isfinite(cosra_theta))
        throw ArgumentError("PD epsilon and CosRA+T theta must be finite");
}

namespace {

// x^e with the exponents that appear in the reduction identities evaluated
// exactly, so that e.g. HHP(1) and MD agree bit for bit.
double power(double x, double e) {
    if (e == 0.0)
        return 1.0;
    if (e == 1.0)
        return x;
    if (e == -1.0)
        return 1.0 / x;
    return std::pow(x, e);
}

// 0^e := 0 for similarity weights, whatever the exponent.
double similarity_power(double x, double e) { return x == 0.0 ? 0.0 : power(x, e); }

RowMatrix zero_scores(const InteractionNetwork &net) {
    return RowMatrix::Zero(static_cast<Eigen::Index>(net.user_count()),
                           static_cast<Eigen::Index>(net.object_count()));
}

// Two-hop diffusion shared by MD, HHP and PD:
//   f_ia = out_a * sum_l b_la / norm_l * sum_b b_lb b_ib in_b
RowMatrix diffuse(const InteractionNetwork &net, const std::vector<double> &in_weight,
                  const std::vector<double> &out_weight, const std::vector<double> &user_norm) {
    RowMatrix scores = zero_scores(net);
    const auto m = static_cast<Eigen::Index>(net.user_count());
    const auto n = scores.cols();
#pragma omp parallel
    {
        std::vector<double> received(net.user_count(), 0.0);
        std::vector<Index> touched;
#pragma omp for schedule(dynamic, 32)
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto items = net.items(static_cast<Index>(i));
            if (items.empty())
                continue;
            touched.clear();
            for (Index beta : items) {
                for (Index l : net.collectors(beta)) {
                    if (received[l] == 0.0)
                        touched.push_back(l);
                    received[l] += in_weight[beta];
                }
            }
            double *row = scores.data() + i * n;
            for (Index l : touched) {
                const double share = received[l] / user_norm[l];
                for (Index alpha : net.items(l))
                    row[alpha] += share;
                received[l] = 0.0;
            }
            for (Eigen::Index alpha = 0; alpha < n; ++alpha)
                row[alpha] *= out_weight[static_cast<std::size_t>(alpha)];
        }
    }
    return scores;
}

std::vector<double> degree_power(const std::vector<std::size_t> &degrees, double e) {
    std::vector<double> out(degrees.size(), 0.0);
    for (std::size_t v = 0; v < degrees.size(); ++v)
        if (degrees[v] > 0)
            out[v] = power(static_cast<double>(degrees[v]), e);
    return out;
}

std::vector<double> as_double(const std::vector<std::size_t> &degrees) {
    return {degrees.begin(), degrees.end()};
}

} // namespace

ScoreMatrix score_md(const InteractionNetwork &train) {
    const auto object_degrees = train.object_degrees();
    return ScoreMatrix(diffuse(train, degree_power(object_degrees, -1.0),
                               std::vector<double>(train.object_count(), 1.0),
                               as_double(train.user_degrees())));
}

ScoreMatrix score_hhp(const InteractionNetwork &train, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw ArgumentError(fmt::format("HHP lambda must lie in [0,1], got {}", lambda));
    const auto object_degrees = train.object_degrees();
    return ScoreMatrix(diffuse(train, degree_power(object_degrees, -lambda),
                               degree_power(object_degrees, lambda - 1.0),
                               as_double(train.user_degrees())));
}

ScoreMatrix score_pd(const InteractionNetwork &train, double epsilon) {
    const auto object_degrees = train.object_degrees();
    const auto preference = degree_power(object_degrees, epsilon);
    std::vector<double> norm(train.user_count(), 0.0);
    for (Index l = 0; l < train.user_count(); ++l)
        for (Index r : train.items(l))
            norm[l] += preference[r];
    return ScoreMatrix(diffuse(train, degree_power(object_degrees, -1.0), preference, norm));
}

ScoreMatrix score_grm(const InteractionNetwork &train) {
    RowMatrix scores = zero_scores(train);
    for (Index o = 0; o < train.object_count(); ++o)
        scores.col(o).setConstant(static_cast<double>(train.object_degree(o)));
    return ScoreMatrix(std::move(scores));
}

RowMatrix rwr_social_similarity(const SocialNetwork &social, double theta3) {
    if (!(theta3 > 0.0 && theta3 < 1.0))
        throw ArgumentError(fmt::format("RWR theta3 must lie in (0,1), got {}", theta3));
    const auto m = static_cast<Eigen::Index>(social.user_count());
    DenseMatrix system = DenseMatrix::Identity(m, m);
    for (Index i = 0; i < social.user_count(); ++i) {
        const double step = theta3 / static_cast<double>(social.degree(i));
        for (Index j : social.neighbors(i))
            system(i, j) -= step;
    }
    // One LU factorization, all m unit right-hand sides.
    Eigen::PartialPivLU<DenseMatrix> lu(system);
    DenseMatrix walk = (1.0 - theta3) * lu.solve(DenseMatrix::Identity(m, m));
    // Column i of `walk` is the walk vector of user i.
    return RowMatrix(walk.transpose());
}

ScoreMatrix score_rwr(const SocialNetwork &social, const InteractionNetwork &train, double theta1,
                      double theta2, double theta3) {
    if (social.user_count() != train.user_count())
        throw ConsistencyError("social and interaction networks disagree on the user count");
    if (social.edge_count() == 0)
        throw ArgumentError("RWR-based scoring needs a nonempty social network");
    if (!(theta1 >= 0.0) || !(theta2 >= 0.0))
        throw ArgumentError("RWR theta1 and theta2 must be nonnegative");
    RowMatrix weights = rwr_social_similarity(social, theta3);
    const RowMatrix preference = detail::user_salton(train);
    const auto m = weights.rows();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            weights(i, j) =
                similarity_power(weights(i, j), theta1) * similarity_power(preference(i, j), theta2);
    return ScoreMatrix(detail::multiply_by_interactions(weights, train));
}

namespace {

RowMatrix cosra_scores(const SocialNetwork *social, const InteractionNetwork &train, double theta) {
    RowMatrix scores = zero_scores(train);
    const auto m = static_cast<Eigen::Index>(train.user_count());
    const auto n = scores.cols();
    std::vector<double> inv_sqrt_user(train.user_count(), 0.0);
    for (Index u = 0; u < train.user_count(); ++u)
        if (train.user_degree(u) > 0)
            inv_sqrt_user[u] = 1.0 / std::sqrt(static_cast<double>(train.user_degree(u)));
    std::vector<double> inv_sqrt_object(train.object_count(), 0.0);
    for (Index o = 0; o < train.object_count(); ++o)
        if (train.object_degree(o) > 0)
            inv_sqrt_object[o] = 1.0 / std::sqrt(static_cast<double>(train.object_degree(o)));

#pragma omp parallel
    {
        std::vector<double> resource(train.user_count(), 0.0);
        std::vector<Index> touched;
#pragma omp for schedule(dynamic, 32)
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto user = static_cast<Index>(i);
            touched.clear();
            for (Index beta : train.items(user)) {
                for (Index j : train.collectors(beta)) {
                    if (resource[j] == 0.0)
                        touched.push_back(j);
                    resource[j] += inv_sqrt_user[j] * inv_sqrt_object[beta];
                }
            }
            double *row = scores.data() + i * n;
            for (Index j : touched) {
                double t = resource[j];
                if (social != nullptr && social->has_edge(user, j))
                    t = power(t, theta);
                const double share = t * inv_sqrt_user[j];
                for (Index alpha : train.items(j))
                    row[alpha] += share;
                resource[j] = 0.0;
            }
            for (Eigen::Index alpha = 0; alpha < n; ++alpha)
                row[alpha] *= inv_sqrt_object[static_cast<std::size_t>(alpha)];
        }
    }
    return scores;
}

} // namespace

ScoreMatrix score_cosra_t(const SocialNetwork &social, const InteractionNetwork &train,
                          double theta) {
    if (social.user_count() != train.user_count())
        throw ConsistencyError("social and interaction networks disagree on the user count");
    if (!std::isfinite(theta))
        throw ArgumentError("CosRA+T theta must be finite");
    if (theta <= 0.0) {
        static std::once_flag warned;
        std::call_once(warned, [&] {
            std::clog << "warning: CosRA+T with theta = " << theta
                      << "; user pairs with zero resource are left at zero\n";
        });
    }
    return ScoreMatrix(cosra_scores(&social, train, theta));
}

ScoreMatrix score_cosra(const InteractionNetwork &train) {
    return ScoreMatrix(cosra_scores(nullptr, train, 1.0));
}

ScoreMatrix score_socmd(const SocialNetwork &social, const InteractionNetwork &train, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ArgumentError(fmt::format("SocMD p must lie in [0,1], got {}", p));
    if (social.user_count() != train.user_count())
        throw ConsistencyError("social and interaction networks disagree on the user count");

    RowMatrix scores = p > 0.0 ? score_md(train).values() : zero_scores(train);
    const auto m = static_cast<Eigen::Index>(train.user_count());
    const auto n = scores.cols();
#pragma omp parallel
    {
        std::vector<double> received(train.user_count(), 0.0);
        std::vector<Index> touched;
        std::vector<double> social_part(static_cast<std::size_t>(n), 0.0);
#pragma omp for schedule(dynamic, 32)
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto user = static_cast<Index>(i);
            double *row = scores.data() + i * n;
            const auto k_user = train.user_degree(user);
            for (Eigen::Index alpha = 0; alpha < n; ++alpha)
                row[alpha] = k_user > 0 ? p * (row[alpha] / static_cast<double>(k_user)) : 0.0;

            if (p == 1.0 || social.degree(user) == 0)
                continue;
            touched.clear();
            const double from_user = 1.0 / static_cast<double>(social.degree(user));
            for (Index j : social.neighbors(user)) {
                const double share = from_user / static_cast<double>(social.degree(j));
                for (Index l : social.neighbors(j)) {
                    if (received[l] == 0.0)
                        touched.push_back(l);
                    received[l] += share;
                }
            }
            std::fill(social_part.begin(), social_part.end(), 0.0);
            for (Index l : touched) {
                const auto k_l = train.user_degree(l);
                if (k_l > 0) {
                    const double share = received[l] / static_cast<double>(k_l);
                    for (Index alpha : train.items(l))
                        social_part[alpha] += share;
                }
                received[l] = 0.0;
            }
            for (Eigen::Index alpha = 0; alpha < n; ++alpha)
                row[alpha] += (1.0 - p) * social_part[static_cast<std::size_t>(alpha)];
        }
    }
    return ScoreMatrix(std::move(scores));
}

} // namespace sblo
