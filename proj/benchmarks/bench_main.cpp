#include <benchmark/benchmark.h>

#include "qtrace/elliptic.hpp"
#include "qtrace/elliptic_numeric.hpp"
#include "qtrace/modular.hpp"
#include "qtrace/pseudotrace.hpp"

using namespace qtrace;

namespace {

void BM_eisenstein(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(eisenstein(2, n));
    }
}
BENCHMARK(BM_eisenstein)->Arg(25)->Arg(50)->Arg(100);

void BM_wp_series(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wp_series(m, 8, 8));
    }
}
BENCHMARK(BM_wp_series)->DenseRange(1, 6);

void BM_wp_recursion_check(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(wp_recursion_check(3, 8, 8));
    }
}
BENCHMARK(BM_wp_recursion_check);

void BM_wp_value(benchmark::State& state)
{
    const Complex z(0.21, 0.13);
    const Complex tau(0.1, 1.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wp_value(2, z, tau));
    }
}
BENCHMARK(BM_wp_value);

void BM_pseudotrace_matrices(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = FDAlgebra<Rational>::matrices(n);
    const auto reg = RightModule<Rational>::regular(p);
    std::vector<Rational> trace(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        trace[i * n + i] = 1;
    }
    const SymFn<Rational> phi{trace};
    const auto basis = find_projective_basis(p, reg);
    const Matrix<Rational> op = Matrix<Rational>::identity(n * n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pseudotrace(p, reg, phi, *basis, op));
    }
}
BENCHMARK(BM_pseudotrace_matrices)->Arg(2)->Arg(3);

void BM_covariance_check(benchmark::State& state)
{
    VectorSeq phi = flow_solution(1, Rational(1));
    const auto samples = default_modular_samples(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(covariance_check(phi, GroupElement::S(), Rational(1), 1, samples));
    }
}
BENCHMARK(BM_covariance_check)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
