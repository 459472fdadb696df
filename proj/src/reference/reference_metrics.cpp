#include "sblo/reference/reference_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace sblo::reference {

std::vector<Index> ranking(std::span<const double> scores, std::span<const Index> eligible) {
    std::vector<Index> order(eligible.begin(), eligible.end());
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        if (scores[x] != scores[y])
            return scores[x] > scores[y];
        return x < y;
    });
    return order;
}

double aupr_sweep(std::span<const double> scores, std::span<const Index> probe,
                  std::span<const Index> eligible) {
    const std::set<Index> relevant(probe.begin(), probe.end());
    const auto order = ranking(scores, eligible);
    std::vector<std::pair<double, double>> curve; // (recall, precision)
    std::size_t hits = 0;
    double last_recall = 0.0;
    for (std::size_t length = 1; length <= order.size(); ++length) {
        hits += relevant.count(order[length - 1]);
        const double recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
        const double precision = static_cast<double>(hits) / static_cast<double>(length);
        if (recall > last_recall)
            curve.emplace_back(recall, precision);
        last_recall = recall;
    }
    if (curve.empty())
        return 0.0;
    curve.insert(curve.begin(), {0.0, curve.front().second});
    double area = 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k)
        area += (curve[k].first - curve[k - 1].first) * (curve[k].second + curve[k - 1].second) / 2.0;
    return area;
}

Accuracy accuracy(std::span<const Index> list, std::size_t length, std::span<const Index> probe) {
    std::size_t hits = 0;
    for (Index o : list)
        for (Index q : probe)
            hits += o == q ? 1 : 0;
    Accuracy acc;
    acc.precision = static_cast<double>(hits) / static_cast<double>(length);
    acc.recall = static_cast<double>(hits) / static_cast<double>(probe.size());
    if (acc.precision + acc.recall > 0.0)
        acc.f_score = 2.0 * acc.precision * acc.recall / (acc.precision + acc.recall);
    return acc;
}

double intra_similarity(std::span<const Index> list, const InteractionNetwork &train) {
    const auto size = list.size();
    double sum = 0.0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y) {
            if (x == y)
                continue;
            const auto cx = train.collectors(list[x]);
            const auto cy = train.collectors(list[y]);
            if (cx.empty() || cy.empty())
                continue;
            double common = 0.0;
            for (Index u : cx)
                common += std::count(cy.begin(), cy.end(), u);
            sum += common / std::sqrt(static_cast<double>(cx.size() * cy.size()));
        }
    return sum / static_cast<double>(size * (size - 1));
}

double popularity(std::span<const Index> list, const InteractionNetwork &train) {
    double sum = 0.0;
    for (Index o : list)
        sum += static_cast<double>(train.collectors(o).size());
    return list.empty() ? 0.0 : sum / static_cast<double>(list.size());
}

double hamming(std::span<const RecommendationList> lists) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t x = 0; x < lists.size(); ++x)
        for (std::size_t y = x + 1; y < lists.size(); ++y) {
            std::size_t common = 0;
            for (Index o : lists[x].objects)
                common += std::count(lists[y].objects.begin(), lists[y].objects.end(), o);
            sum += 1.0 - static_cast<double>(common) / static_cast<double>(lists[x].length);
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

} // namespace sblo::reference
