// Serial vs OpenMP comparison for the quadrature kernel and the per-term
// symbolic driver.
#include "helm/decompose.hpp"
#include "helm/numeric.hpp"
#include "helm/parse.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

helm::FieldSampler gaussian_sampler() {
    helm::FieldSampler s;
    s.n = 2;
    s.components.push_back(
        [](std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); });
    s.components.push_back([](std::span<const double>) { return 0.0; });
    return s;
}

void bm_quadrature(benchmark::State& state, int mode) {
    helm::QuadratureSpec spec{4.0, 0.05, 2, 0, mode == 2};
    const std::vector<std::vector<double>> pts{{1.0, 0.3}, {-0.8, 0.8}};
    auto sampler = gaussian_sampler();
    for (auto _ : state) {
        auto out = mode == 0 ? helm::theorem2_decompose_reference(sampler, pts, spec)
                             : helm::theorem2_decompose(sampler, pts, spec);
        benchmark::DoNotOptimize(out.g[0][0]);
    }
}

void BM_quadrature_reference(benchmark::State& state) { bm_quadrature(state, 0); }
void BM_quadrature_serial(benchmark::State& state) { bm_quadrature(state, 1); }
void BM_quadrature_parallel(benchmark::State& state) { bm_quadrature(state, 2); }

helm::VectorField dense_polynomial_field(int n, int terms_per_component) {
    helm::VectorField f(n);
    for (int k = 0; k < n; ++k)
        for (int t = 0; t < terms_per_component; ++t) {
            helm::Monomial m(n);
            m[k] = helm::Atom{static_cast<unsigned>(t % 4), 0, helm::Trig::none, 0};
            m[(k + 1) % n] = helm::Atom{static_cast<unsigned>(2 + t % 3), 0, helm::Trig::none, 0};
            m[(k + 2) % n] = helm::Atom{static_cast<unsigned>(t % 3), 0, helm::Trig::none, 0};
            f.components[k].add_term(m, helm::Rational(t + 1, 3));
        }
    return f;
}

void bm_decompose(benchmark::State& state, int threads) {
#ifdef _OPENMP
    omp_set_num_threads(threads);
#else
    (void)threads;
#endif
    const helm::VectorField f = dense_polynomial_field(4, 16);
    for (auto _ : state) {
        auto d = helm::decompose(f);
        benchmark::DoNotOptimize(d.reports.size());
    }
}

void BM_decompose_serial(benchmark::State& state) { bm_decompose(state, 1); }
void BM_decompose_parallel(benchmark::State& state) {
#ifdef _OPENMP
    bm_decompose(state, omp_get_num_procs());
#else
    bm_decompose(state, 1);
#endif
}

} // namespace

BENCHMARK(BM_quadrature_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_quadrature_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_quadrature_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_decompose_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_decompose_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
