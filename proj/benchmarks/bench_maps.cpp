#include <benchmark/benchmark.h>

#include "ifslab/area_map.hpp"
#include "ifslab/rng.hpp"

using namespace ifslab;

static void BM_TwistApply(benchmark::State& state) {
    const AreaMap f = AreaMap::integrable_twist(Chart::annulus(), 1.0);
    ChartPoint p{0.123, 0.456};
    for (auto _ : state) {
        p = f.apply(p);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_TwistApply);

static void BM_KickedApply(benchmark::State& state) {
    const AreaMap f = AreaMap::kicked_twist(Chart::torus(), 1.2);
    ChartPoint p{0.123, 0.456};
    for (auto _ : state) {
        p = f.apply(p);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_KickedApply);

static void BM_SeparatorApply(benchmark::State& state) {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.03, -0.02, 0.025};
    const AreaMap h = build_separator(spec);
    Rng rng(5);
    std::vector<ChartPoint> pts;
    for (int k = 0; k < 64; ++k) pts.push_back({rng.uniform(), rng.uniform()});
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(h.apply(pts[i++ & 63]));
    }
}
BENCHMARK(BM_SeparatorApply);

static void BM_ConjugatedApply(benchmark::State& state) {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.03, -0.02, 0.025};
    const AreaMap g = AreaMap::integrable_twist(Chart::annulus(), 1.0);
    const AreaMap gt = AreaMap::conjugate(
        g, AreaMap::band_embedded(build_separator(spec), Band{0.1, 0.9}));
    Rng rng(5);
    std::vector<ChartPoint> pts;
    for (int k = 0; k < 64; ++k) pts.push_back({rng.uniform(), rng.uniform()});
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gt.apply(pts[i++ & 63]));
    }
}
BENCHMARK(BM_ConjugatedApply);

static void BM_JacobianDet(benchmark::State& state) {
    const AreaMap f = AreaMap::kicked_twist(Chart::torus(), 1.2);
    ChartPoint p{0.37, 0.61};
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobian_det(f, p, 1e-5));
    }
}
BENCHMARK(BM_JacobianDet);

BENCHMARK_MAIN();
