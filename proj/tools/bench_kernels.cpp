// Serial reference vs OpenMP row sums of the nonlocal kernel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fkpp/field.hpp"
#include "fkpp/kernels.hpp"

namespace {

struct Setup {
    std::vector<double> kw, u, out;
    explicit Setup(std::size_t n) {
        const auto g = fkpp::FieldGrid::make(-10.0, 10.0, n);
        kw = fkpp::kernels::weighted_matrix(g, [](double x, double y) { return std::exp(-(x - y) * (x - y)); });
        u.resize(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(-g.x(i) * g.x(i));
        out.resize(n);
    }
};

void BM_nonlocal_serial(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        fkpp::kernels::nonlocal_apply_serial(s.kw, s.u, s.out);
        benchmark::DoNotOptimize(s.out.data());
    }
    state.SetComplexityN(state.range(0));
}

void BM_nonlocal_omp(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        fkpp::kernels::nonlocal_apply_omp(s.kw, s.u, s.out);
        benchmark::DoNotOptimize(s.out.data());
    }
    state.counters["threads"] = fkpp::kernels::max_threads();
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_nonlocal_serial)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_nonlocal_omp)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

BENCHMARK_MAIN();
