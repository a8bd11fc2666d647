#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "ifslab/boxdim.hpp"
#include "ifslab/grid_continuum.hpp"
#include "ifslab/ifs.hpp"
#include "ifslab/rng.hpp"

using namespace ifslab;

namespace {

GridContinuum wavy_circle(int n) {
    std::vector<ChartPoint> pts;
    for (int k = 0; k <= 4 * n; ++k) {
        const double x = static_cast<double>(k) / (4 * n);
        pts.push_back({x, 0.5 + 0.15 * std::sin(2.0 * std::numbers::pi * x)});
    }
    return rasterize(pts, Chart::annulus(), n);
}

PointCloud3 random_chain(int count, Rng rng) {
    std::vector<std::array<double, 3>> pts(count);
    std::array<double, 3> acc{};
    for (auto& p : pts) {
        for (int c = 0; c < 3; ++c) acc[c] += rng.uniform();
        p = acc;
    }
    for (auto& p : pts)
        for (int c = 0; c < 3; ++c) p[c] /= acc[c] + 1e-9;
    return PointCloud3::from_points(std::move(pts));
}

}  // namespace

static void BM_ExtractFrontier(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridContinuum k = wavy_circle(n);
    const Band band{0.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_frontier(k, band));
    }
}
BENCHMARK(BM_ExtractFrontier)->Arg(64)->Arg(128)->Arg(256);

static void BM_BoxCount(benchmark::State& state) {
    const PointCloud3 cloud = random_chain(1000, Rng(2));
    const double side = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(box_count(cloud, side));
    }
}
BENCHMARK(BM_BoxCount)->Arg(16)->Arg(64)->Arg(256);

static void BM_CoverageTwists(benchmark::State& state) {
    const AreaMap f = AreaMap::integrable_twist(Chart::annulus(), 1.0);
    const AreaMap g = AreaMap::integrable_twist(Chart::annulus(), 1.0, 0.381966);
    for (auto _ : state) {
        benchmark::DoNotOptimize(coverage_test(f, g, {0.51, 0.5}, 32, 2000));
    }
}
BENCHMARK(BM_CoverageTwists);

BENCHMARK_MAIN();
