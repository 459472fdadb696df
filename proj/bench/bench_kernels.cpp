// Parallel kernels against the serial reference on one synthetic dataset.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "sblo/baselines.hpp"
#include "sblo/factor_model.hpp"
#include "sblo/reference/reference_scores.hpp"
#include "sblo/synthetic.hpp"

namespace {

using namespace sblo;

struct Fixture {
    Dataset data;
    RowMatrix a;
    RowMatrix b;
    ImplicitFactorMatrix factors;
    RowMatrix s;

    static const Fixture &get() {
        static const Fixture f = [] {
            SyntheticConfig cfg;
            cfg.users = 300;
            cfg.objects = 400;
            auto data = make_coupled_dataset(cfg);
            auto factors = solve_sblo(data.social, data.interactions, {0.05, 0.05});
            RowMatrix s = factors.matrix();
            return Fixture{data, reference::dense_social(data.social),
                           reference::dense_interactions(data.interactions), std::move(factors),
                           std::move(s)};
        }();
        return f;
    }
};

void BM_md_parallel(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(score_md(f.data.interactions));
}

void BM_md_reference(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::md(f.b));
}

void BM_socmd_parallel(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(score_socmd(f.data.social, f.data.interactions, 0.5));
}

void BM_socmd_reference(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::socmd(f.a, f.b, 0.5));
}

void BM_cosra_t_parallel(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(score_cosra_t(f.data.social, f.data.interactions, 0.5));
}

void BM_cosra_t_reference(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::cosra_t(f.a, f.b, 0.5));
}

void BM_rwr_parallel(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(score_rwr(f.data.social, f.data.interactions, 1.0, 1.0, 0.5));
}

void BM_rwr_reference(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::rwr(f.a, f.b, 1.0, 1.0, 0.5));
}

void BM_sblo_scores_parallel(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(score_sblo(f.factors, f.data.interactions, false));
}

void BM_sblo_scores_reference(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::multiply(f.s, f.b));
}

void BM_coupling_parallel(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(coupling_matrix(f.data.social, f.data.interactions, 0.05, 0.05));
}

void BM_coupling_reference(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::coupling(f.a, f.b, 0.05, 0.05));
}

void BM_sblo_solve(benchmark::State &state) {
    const auto &f = Fixture::get();
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_sblo(f.data.social, f.data.interactions, {0.05, 0.05}));
}

} // namespace

BENCHMARK(BM_md_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_md_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_socmd_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_socmd_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cosra_t_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cosra_t_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rwr_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rwr_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sblo_scores_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sblo_scores_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coupling_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coupling_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sblo_solve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
