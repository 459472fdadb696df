#pragma once

// Shared test fixtures, random instance generators and independent oracles.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "sblo/factor_model.hpp"
#include "sblo/graph_data.hpp"
#include "sblo/reference/reference_scores.hpp"

namespace sblo::test {

/// Fresh directory under the system temp dir; removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("sblo-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    const std::filesystem::path &path() const { return path_; }
    std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path);
    out << text;
    return path;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline SocialNetwork random_social(std::size_t m, double p, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Index a = 0; a < m; ++a)
        for (Index b = a + 1; b < m; ++b)
            if (coin(rng))
                edges.push_back({a, b});
    return SocialNetwork(m, edges);
}

inline InteractionNetwork random_interactions(std::size_t m, std::size_t n, double p,
                                              std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Index u = 0; u < m; ++u)
        for (Index o = 0; o < n; ++o)
            if (coin(rng))
                edges.push_back({u, o});
    return InteractionNetwork(m, n, edges);
}

/// Random simple graph with exactly `edge_count` edges.
inline SocialNetwork random_graph(std::size_t m, std::size_t edge_count, std::mt19937_64 &rng) {
    std::vector<Edge> pairs;
    for (Index a = 0; a < m; ++a)
        for (Index b = a + 1; b < m; ++b)
            pairs.push_back({a, b});
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(std::min(edge_count, pairs.size()));
    return SocialNetwork(m, pairs);
}

/// 20 users, 16 objects, fixed edges, every user and object active.
inline std::pair<SocialNetwork, InteractionNetwork> twenty_user_fixture() {
    std::mt19937_64 rng(20);
    auto interactions = random_interactions(20, 16, 0.3, rng);
    std::vector<Edge> extra = interactions.edges();
    for (Index u = 0; u < 20; ++u)
        extra.push_back({u, static_cast<Index>(u % 16)});
    for (Index o = 0; o < 16; ++o)
        extra.push_back({static_cast<Index>(o + 3), o});
    auto social = random_social(20, 0.2, rng);
    return {social, InteractionNetwork(20, 16, extra)};
}

/// The SBLO objective written out entry by entry.
inline double objective_oracle(const RowMatrix &s, const RowMatrix &a, const RowMatrix &b,
                               double lambda1, double lambda2) {
    const RowMatrix sa = reference::multiply(s, a);
    const RowMatrix sb = reference::multiply(s, b);
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j)
            total += s(i, j) * s(i, j);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            total += lambda1 * (a(i, j) - sa(i, j)) * (a(i, j) - sa(i, j));
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            total += lambda2 * (b(i, j) - sb(i, j)) * (b(i, j) - sb(i, j));
    return total;
}

/// Minimizes |S|^2 + l1 |A - SA|^2 + l2 |B - SB|^2 by Nesterov-accelerated
/// gradient descent, with the gradient formed from the residuals
///   grad = 2 S - 2 l1 (A - SA) A^T - 2 l2 (B - SB) B^T.
inline RowMatrix gradient_descent_oracle(const RowMatrix &a, const RowMatrix &b, double lambda1,
                                         double lambda2, int max_iterations = 200000) {
    const auto m = a.rows();
    const double smooth = 2.0 * (1.0 + lambda1 * a.squaredNorm() + lambda2 * b.squaredNorm());
    const double step = 1.0 / smooth;
    // strong convexity 2 -> momentum from the condition number
    const double kappa = smooth / 2.0;
    const double momentum = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);
    RowMatrix s = RowMatrix::Zero(m, m);
    RowMatrix previous = s;
    for (int it = 0; it < max_iterations; ++it) {
        const RowMatrix y = s + momentum * (s - previous);
        const RowMatrix gradient = 2.0 * y - 2.0 * lambda1 * (a - y * a) * a.transpose() -
                                   2.0 * lambda2 * (b - y * b) * b.transpose();
        previous = s;
        s = y - step * gradient;
        if (gradient.norm() < 1e-14 * (1.0 + s.norm()))
            break;
    }
    return s;
}

} // namespace sblo::test
