#include <vector>

#include <benchmark/benchmark.h>

#include "ecov/eig.hpp"
#include "ecov/ellipsoid.hpp"
#include "ecov/kernels.hpp"
#include "ecov/mat.hpp"
#include "ecov/rng.hpp"

namespace {

using namespace ecov;

Mat random_mat(SeededRng& rng, int n) {
    Mat a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    return a;
}

void BM_solve_power_sum(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee1u);
    std::vector<double> a(d), b(d);
    for (int i = 0; i < d; ++i) {
        a[i] = rng.exp2_uniform(-6.0, 6.0);
        b[i] = rng.uniform(0.25, 8.0);
    }
    for (auto _ : state) benchmark::DoNotOptimize(solve_power_sum(a, b));
}
BENCHMARK(BM_solve_power_sum)->DenseRange(2, 4);

void BM_bisect_monotone(benchmark::State& state) {
    auto f = [](double x) { return x * x * x + x - 1.0; };
    for (auto _ : state)
        benchmark::DoNotOptimize(bisect_monotone(f, 0.0, 1.0, 1e-12));
}
BENCHMARK(BM_bisect_monotone);

void BM_norm_extrema_on_ball(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee2u);
    Mat a = random_mat(rng, n);
    Vec d = rng.normal_vec(n) * 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(norm_extrema_on_ball(a, d));
}
BENCHMARK(BM_norm_extrema_on_ball)->DenseRange(2, 5);

void BM_sym_eig(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee3u);
    Mat a = random_mat(rng, n);
    Mat s(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s(i, j) = 0.0;
            for (int k = 0; k < n; ++k) s(i, j) += a(k, i) * a(k, j);
        }
    for (auto _ : state) benchmark::DoNotOptimize(sym_eig(s));
}
BENCHMARK(BM_sym_eig)->DenseRange(2, 8);

void BM_spectral_norm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee4u);
    Mat a = random_mat(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(a));
}
BENCHMARK(BM_spectral_norm)->DenseRange(2, 8);

void BM_lu_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee5u);
    Mat a = random_mat(rng, n);
    Vec b = rng.normal_vec(n);
    Lu lu(a);
    for (auto _ : state) benchmark::DoNotOptimize(lu.solve(b));
}
BENCHMARK(BM_lu_solve)->DenseRange(2, 8);

void BM_contains_ellipsoid(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee6u);
    Ellipsoid inner = random_ellipsoid(rng, n, -2.0, 2.0, Vec(n, -1.0), Vec(n, 1.0));
    Ellipsoid outer = dilate(inner, 4.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(contains_ellipsoid(inner, outer));
}
BENCHMARK(BM_contains_ellipsoid)->DenseRange(2, 5);

void BM_check_reverse_inclusion(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee7u);
    Ellipsoid eta = random_ellipsoid(rng, n, -2.0, 2.0, Vec(n, -1.0), Vec(n, 1.0));
    Ellipsoid xi = dilate(eta, 4.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(check_reverse_inclusion(eta, xi));
}
BENCHMARK(BM_check_reverse_inclusion)->DenseRange(2, 5);

void BM_rng_unit_vec(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededRng rng(0xbe9c0ffee8u);
    for (auto _ : state) benchmark::DoNotOptimize(rng.unit_vec(n));
}
BENCHMARK(BM_rng_unit_vec)->DenseRange(2, 5);

} // namespace
