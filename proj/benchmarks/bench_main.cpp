#include <benchmark/benchmark.h>

#include "qkud/krylov.hpp"
#include "qkud/lcu.hpp"
#include "qkud/models.hpp"

using namespace qkud;

static void BM_PauliApply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PauliSum h = build_tfim(n, 1.0, 1.0);
    const Statevector v = plus_state(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(h.apply(v));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PauliApply)->DenseRange(4, 12, 2);

static void BM_Eigendecompose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix dense = build_tfim(n, 1.0, 1.0).to_dense();
    for (auto _ : state)
        benchmark::DoNotOptimize(hermitian_eigendecompose(dense));
}
BENCHMARK(BM_Eigendecompose)->DenseRange(4, 10, 2);

static void BM_QkudStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PauliSum h = build_tfim(n, 1.0, 1.0);
    const auto cache = hermitian_eigendecompose(h.to_dense());
    const Statevector v = plus_state(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(qkud_step(v, 0.1, cache));
}
BENCHMARK(BM_QkudStep)->DenseRange(4, 10, 2);

static void BM_SolveGevp(benchmark::State& state) {
    const auto k = state.range(0);
    const PauliSum h = build_tfim(6, 1.0, 1.0);
    const auto cache = hermitian_eigendecompose(h.to_dense());
    std::vector<Statevector> vecs{plus_state(6)};
    for (Eigen::Index j = 1; j < k; ++j) {
        Statevector next = qkud_step(vecs.back(), 0.1, cache);
        vecs.push_back(next / next.norm());
    }
    const auto [m, s] = assemble_matrices(vecs, h);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_gevp(m, s, 1e-12));
}
BENCHMARK(BM_SolveGevp)->Arg(8)->Arg(16)->Arg(24);

static void BM_LcuAssemble(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    const PauliSum h = build_tfim(4, 1.0, 1.0);
    const auto cache = hermitian_eigendecompose(h.to_dense());
    const auto table = build_primitive_table(order, 0.1, cache, plus_state(4), h);
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_matrices_lcu(order, 0.1, table));
}
BENCHMARK(BM_LcuAssemble)->DenseRange(2, 8, 2);

BENCHMARK_MAIN();
