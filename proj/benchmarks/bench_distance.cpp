#include <benchmark/benchmark.h>

#include "ecov/characterization.hpp"
#include "ecov/cover.hpp"
#include "ecov/quasi_distance.hpp"
#include "ecov/rng.hpp"

namespace {

using namespace ecov;

void BM_rho_theta0(benchmark::State& state) {
    Vec x{0.3, 0.02};
    Vec y{0.31, -0.05};
    for (auto _ : state) benchmark::DoNotOptimize(rho_theta0(x, y));
}
BENCHMARK(BM_rho_theta0);

void BM_rho_nsw(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    QuasiDistance d = nsw_metric(k);
    Vec x{0.4, 0.1};
    Vec y{0.45, 0.09};
    for (auto _ : state) benchmark::DoNotOptimize(d.eval(x, y));
}
BENCHMARK(BM_rho_nsw)->DenseRange(0, 2);

void BM_cover_eval_theta0(benchmark::State& state) {
    Cover cov = theta0_cover();
    // near-axis regime at a fine scale: the most branchy table entry
    Vec x{0.2, 0.001};
    for (auto _ : state) benchmark::DoNotOptimize(cover_eval(cov, x, 9.0));
}
BENCHMARK(BM_cover_eval_theta0);

void BM_rho_induced_analytic(benchmark::State& state) {
    // bisection over the scale of an analytic (closed form) cover family
    Cover cov = theta0_cover();
    Vec x{0.3, 0.02};
    Vec y{0.31, -0.05};
    for (auto _ : state) benchmark::DoNotOptimize(rho_induced(cov, x, y));
}
BENCHMARK(BM_rho_induced_analytic);

void BM_rho_induced_fitted(benchmark::State& state) {
    // same bisection, but every scale evaluation is a generic inscribed fit
    // of a metric ball; this is the unit of work behind round-trip scans
    XiCoverInputs in;
    Cover xi = build_xi_cover(theta0_metric(), in);
    Vec x{0.3, 0.02};
    Vec y{0.31, -0.05};
    const double t_tol = state.range(0) == 0 ? 5e-9 : 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(rho_induced(xi, x, y, t_tol));
}
BENCHMARK(BM_rho_induced_fitted)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_inscribed_fit(benchmark::State& state) {
    QuasiDistance d = theta0_metric();
    FitOptions fit;
    Vec x{0.2, 0.05};
    for (auto _ : state)
        benchmark::DoNotOptimize(inscribed_centered_ellipsoid(d, x, 0.01, fit));
}
BENCHMARK(BM_inscribed_fit)->Unit(benchmark::kMicrosecond);

void BM_isotropic_induced_eval(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    QuasiDistance d = isotropic_induced_metric(n);
    SeededRng rng(0xbe9c0ffeedu);
    Vec x = rng.normal_vec(n);
    Vec y = rng.normal_vec(n);
    for (auto _ : state) benchmark::DoNotOptimize(d.eval(x, y));
}
BENCHMARK(BM_isotropic_induced_eval)->DenseRange(2, 5);

void BM_derive_constants(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(derive_constants(1.2, 1.5, 2.0, 2));
}
BENCHMARK(BM_derive_constants);

} // namespace

BENCHMARK_MAIN();
