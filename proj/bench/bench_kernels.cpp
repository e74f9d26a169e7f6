#include "mutsel/kernels.hpp"
#include "mutsel/matrix.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using namespace mutsel;

DenseMatrix make_kernel(std::size_t n) {
    DenseMatrix K(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) K(i, j) = 1.0 + 0.5 * std::cos(0.01 * static_cast<double>(i * j));
    return K;
}

std::vector<double> make_state(std::size_t n) {
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = 1.0 + 0.25 * std::sin(0.1 * static_cast<double>(i));
    return u;
}

template <auto Matvec>
void BM_matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const DenseMatrix K = make_kernel(n);
    const std::vector<double> v = make_state(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        Matvec(K, v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

template <auto AbsPow>
void BM_abs_pow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> u = make_state(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        AbsPow(u, 1.5, 1.0 / static_cast<double>(n), out);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_matvec<kernels::serial::dense_matvec>)->RangeMultiplier(2)->Range(128, 2048);
BENCHMARK(BM_matvec<kernels::omp::dense_matvec>)->RangeMultiplier(2)->Range(128, 2048);
BENCHMARK(BM_abs_pow<kernels::serial::weighted_abs_pow>)->RangeMultiplier(4)->Range(128, 8192);
BENCHMARK(BM_abs_pow<kernels::omp::weighted_abs_pow>)->RangeMultiplier(4)->Range(128, 8192);

BENCHMARK_MAIN();
