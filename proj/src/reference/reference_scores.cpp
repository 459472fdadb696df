#include "sblo/reference/reference_scores.hpp"

#include <cmath>
#include <utility>

namespace sblo::reference {

namespace {

using Eigen::Index;

RowMatrix zeros(Index rows, Index cols) { return RowMatrix::Zero(rows, cols); }

std::vector<double> row_sums(const RowMatrix &x) {
    std::vector<double> out(static_cast<std::size_t>(x.rows()), 0.0);
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j)
            out[static_cast<std::size_t>(i)] += x(i, j);
    return out;
}

std::vector<double> col_sums(const RowMatrix &x) {
    std::vector<double> out(static_cast<std::size_t>(x.cols()), 0.0);
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j)
            out[static_cast<std::size_t>(j)] += x(i, j);
    return out;
}

double simpow(double x, double e) { return x == 0.0 ? 0.0 : std::pow(x, e); }

// f_ia = sum_b b_ib W_ab for an n x n object weight matrix.
RowMatrix apply_object_weights(const RowMatrix &b, const RowMatrix &w) {
    RowMatrix f = zeros(b.rows(), b.cols());
    for (Index i = 0; i < b.rows(); ++i)
        for (Index alpha = 0; alpha < b.cols(); ++alpha)
            for (Index beta = 0; beta < b.cols(); ++beta)
                f(i, alpha) += b(i, beta) * w(alpha, beta);
    return f;
}

} // namespace

RowMatrix dense_interactions(const InteractionNetwork &net) {
    RowMatrix b = zeros(static_cast<Index>(net.user_count()), static_cast<Index>(net.object_count()));
    for (const auto &e : net.edges())
        b(e.first, e.second) = 1.0;
    return b;
}

RowMatrix dense_social(const SocialNetwork &net) {
    const auto m = static_cast<Index>(net.user_count());
    RowMatrix a = zeros(m, m);
    for (const auto &e : net.edges()) {
        a(e.first, e.second) = 1.0;
        a(e.second, e.first) = 1.0;
    }
    return a;
}

RowMatrix md(const RowMatrix &b) { return hhp(b, 1.0); }

RowMatrix hhp(const RowMatrix &b, double lambda) {
    const auto ku = row_sums(b);
    const auto ko = col_sums(b);
    const Index n = b.cols();
    RowMatrix w = zeros(n, n);
    for (Index alpha = 0; alpha < n; ++alpha)
        for (Index beta = 0; beta < n; ++beta) {
            double sum = 0.0;
            for (Index l = 0; l < b.rows(); ++l)
                if (b(l, alpha) * b(l, beta) != 0.0)
                    sum += 1.0 / ku[static_cast<std::size_t>(l)];
            if (sum != 0.0)
                w(alpha, beta) = sum / (std::pow(ko[static_cast<std::size_t>(alpha)], 1.0 - lambda) *
                                        std::pow(ko[static_cast<std::size_t>(beta)], lambda));
        }
    return apply_object_weights(b, w);
}

RowMatrix pd(const RowMatrix &b, double epsilon) {
    const auto ko = col_sums(b);
    const Index n = b.cols();
    std::vector<double> norm(static_cast<std::size_t>(b.rows()), 0.0);
    for (Index l = 0; l < b.rows(); ++l)
        for (Index r = 0; r < n; ++r)
            if (b(l, r) != 0.0)
                norm[static_cast<std::size_t>(l)] += std::pow(ko[static_cast<std::size_t>(r)], epsilon);
    RowMatrix w = zeros(n, n);
    for (Index alpha = 0; alpha < n; ++alpha)
        for (Index beta = 0; beta < n; ++beta) {
            double sum = 0.0;
            for (Index l = 0; l < b.rows(); ++l)
                if (b(l, alpha) * b(l, beta) != 0.0)
                    sum += 1.0 / norm[static_cast<std::size_t>(l)];
            if (sum != 0.0)
                w(alpha, beta) = std::pow(ko[static_cast<std::size_t>(alpha)], epsilon) /
                                 ko[static_cast<std::size_t>(beta)] * sum;
        }
    return apply_object_weights(b, w);
}

RowMatrix grm(const RowMatrix &b) {
    const auto ko = col_sums(b);
    RowMatrix f = zeros(b.rows(), b.cols());
    for (Index i = 0; i < b.rows(); ++i)
        for (Index alpha = 0; alpha < b.cols(); ++alpha)
            f(i, alpha) = ko[static_cast<std::size_t>(alpha)];
    return f;
}

RowMatrix cosra_t(const RowMatrix &a, const RowMatrix &b, double theta) {
    const auto ku = row_sums(b);
    const auto ko = col_sums(b);
    const Index m = b.rows();
    const Index n = b.cols();
    RowMatrix f = zeros(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            double t = 0.0;
            for (Index beta = 0; beta < n; ++beta)
                if (b(i, beta) * b(j, beta) != 0.0)
                    t += 1.0 / std::sqrt(ku[static_cast<std::size_t>(j)] * ko[static_cast<std::size_t>(beta)]);
            if (t == 0.0)
                continue;
            const double weight = a(i, j) * std::pow(t, theta) + (1.0 - a(i, j)) * t;
            for (Index alpha = 0; alpha < n; ++alpha)
                if (b(j, alpha) != 0.0)
                    f(i, alpha) += weight / std::sqrt(ku[static_cast<std::size_t>(j)] *
                                                      ko[static_cast<std::size_t>(alpha)]);
        }
    return f;
}

RowMatrix socmd(const RowMatrix &a, const RowMatrix &b, double p) {
    const auto ku = row_sums(b);
    const auto ko = col_sums(b);
    const auto ka = row_sums(a);
    const Index m = b.rows();
    const Index n = b.cols();
    RowMatrix f = zeros(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index alpha = 0; alpha < n; ++alpha) {
            double behavioural = 0.0;
            double social = 0.0;
            for (Index l = 0; l < m; ++l) {
                if (b(l, alpha) == 0.0)
                    continue;
                for (Index beta = 0; beta < n; ++beta)
                    if (b(l, beta) * b(i, beta) != 0.0)
                        behavioural += 1.0 / (ku[static_cast<std::size_t>(l)] *
                                              ko[static_cast<std::size_t>(beta)] *
                                              ku[static_cast<std::size_t>(i)]);
                for (Index j = 0; j < m; ++j)
                    if (a(l, j) * a(j, i) != 0.0)
                        social += 1.0 / (ku[static_cast<std::size_t>(l)] *
                                         ka[static_cast<std::size_t>(j)] *
                                         ka[static_cast<std::size_t>(i)]);
            }
            f(i, alpha) = p * behavioural + (1.0 - p) * social;
        }
    return f;
}

RowMatrix restart_walk(const RowMatrix &a, double theta3) {
    const Index m = a.rows();
    const auto ka = row_sums(a);
    // Augmented [I - theta3 T | I], reduced to [I | inverse].
    RowMatrix aug = zeros(m, 2 * m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            const double t = a(i, j) != 0.0 ? a(i, j) / ka[static_cast<std::size_t>(i)] : 0.0;
            aug(i, j) = (i == j ? 1.0 : 0.0) - theta3 * t;
        }
        aug(i, m + i) = 1.0;
    }
    for (Index c = 0; c < m; ++c) {
        Index pivot = c;
        for (Index r = c + 1; r < m; ++r)
            if (std::abs(aug(r, c)) > std::abs(aug(pivot, c)))
                pivot = r;
        if (pivot != c)
            for (Index k = 0; k < 2 * m; ++k)
                std::swap(aug(c, k), aug(pivot, k));
        const double diag = aug(c, c);
        for (Index k = 0; k < 2 * m; ++k)
            aug(c, k) /= diag;
        for (Index r = 0; r < m; ++r) {
            if (r == c || aug(r, c) == 0.0)
                continue;
            const double factor = aug(r, c);
            for (Index k = 0; k < 2 * m; ++k)
                aug(r, k) -= factor * aug(c, k);
        }
    }
    RowMatrix walk = zeros(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            walk(i, j) = (1.0 - theta3) * aug(j, m + i); // column i of the inverse
    return walk;
}

RowMatrix user_salton(const RowMatrix &b) {
    const auto ku = row_sums(b);
    const Index m = b.rows();
    RowMatrix s = zeros(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            double common = 0.0;
            for (Index o = 0; o < b.cols(); ++o)
                common += b(i, o) * b(j, o);
            if (common != 0.0)
                s(i, j) = common / std::sqrt(ku[static_cast<std::size_t>(i)] * ku[static_cast<std::size_t>(j)]);
        }
    return s;
}

RowMatrix rwr(const RowMatrix &a, const RowMatrix &b, double theta1, double theta2, double theta3) {
    const auto ra = restart_walk(a, theta3);
    const auto rb = user_salton(b);
    RowMatrix w = zeros(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            w(i, j) = simpow(ra(i, j), theta1) * simpow(rb(i, j), theta2);
    return multiply(w, b);
}

RowMatrix coupling(const RowMatrix &a, const RowMatrix &b, double lambda1, double lambda2) {
    const Index m = b.rows();
    RowMatrix out = zeros(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            double social = 0.0;
            for (Index k = 0; k < m; ++k)
                social += a(i, k) * a(k, j);
            double behavioural = 0.0;
            for (Index o = 0; o < b.cols(); ++o)
                behavioural += b(i, o) * b(j, o);
            out(i, j) = lambda1 * social + lambda2 * behavioural;
        }
    return out;
}

RowMatrix multiply(const RowMatrix &s, const RowMatrix &b) {
    RowMatrix r = zeros(s.rows(), b.cols());
    for (Index i = 0; i < s.rows(); ++i)
        for (Index k = 0; k < s.cols(); ++k)
            for (Index o = 0; o < b.cols(); ++o)
                r(i, o) += s(i, k) * b(k, o);
    return r;
}

} // namespace sblo::reference
