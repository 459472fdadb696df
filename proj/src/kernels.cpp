#include "kernels.hpp"

#include <cmath>

namespace sblo::detail {

RowMatrix multiply_by_interactions(const RowMatrix &weights, const InteractionNetwork &net) {
    const auto m = static_cast<Eigen::Index>(weights.rows());
    const auto inner = static_cast<Eigen::Index>(net.user_count());
    RowMatrix out = RowMatrix::Zero(m, static_cast<Eigen::Index>(net.object_count()));
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < m; ++i) {
        const double *w = weights.data() + i * inner;
        double *r = out.data() + i * out.cols();
        for (Eigen::Index j = 0; j < inner; ++j) {
            const double wij = w[j];
            if (wij == 0.0)
                continue;
            for (Index object : net.items(static_cast<Index>(j)))
                r[object] += wij;
        }
    }
    return out;
}

RowMatrix user_cooccurrence(const InteractionNetwork &net) {
    const auto m = static_cast<Eigen::Index>(net.user_count());
    RowMatrix out = RowMatrix::Zero(m, m);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < m; ++i) {
        double *row = out.data() + i * m;
        for (Index object : net.items(static_cast<Index>(i)))
            for (Index j : net.collectors(object))
                row[j] += 1.0;
    }
    return out;
}

RowMatrix user_salton(const InteractionNetwork &net) {
    RowMatrix out = user_cooccurrence(net);
    const auto m = out.rows();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
        const double ki = static_cast<double>(net.user_degree(static_cast<Index>(i)));
        for (Eigen::Index j = 0; j < m; ++j) {
            double &v = out(i, j);
            if (v == 0.0)
                continue;
            const double kj = static_cast<double>(net.user_degree(static_cast<Index>(j)));
            v /= std::sqrt(ki * kj);
        }
    }
    return out;
}

} // namespace sblo::detail
