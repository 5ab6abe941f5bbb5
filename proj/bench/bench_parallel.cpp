#include <benchmark/benchmark.h>

#include "sspkit/kernel.hpp"

using namespace sspkit;

namespace {

std::vector<KernelPoint> grid_points(int levels, int width) {
    std::vector<KernelPoint> pts;
    for (int j = 1; j <= levels; ++j)
        for (int u = -width; u < width; ++u) pts.push_back({j, false, u});
    return pts;
}

void kernel_matrix_bench(benchmark::State& state, bool parallel) {
    auto pts = grid_points(3, 3);
    QuadratureConfig cfg;
    cfg.nodes_z = cfg.nodes_w = 128;
    KernelFn f = [&](const KernelPoint& p, const KernelPoint& q) {
        return kssp_berele(p.level, p.pos, q.level, q.pos, 3, cfg);
    };
    for (auto _ : state) benchmark::DoNotOptimize(kernel_matrix(pts, f, parallel));
}

void monte_carlo_bench(benchmark::State& state, bool parallel) {
    std::vector<std::vector<KernelPoint>> sets{{{1, false, 0}}, {{1, false, 0}, {2, false, -1}}};
    McOptions opt;
    opt.samples = 20000;
    opt.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(mc_correlations(sets, 2, 2, {1, 1}, {1.0 / 3, 1.0 / 3}, opt));
}

}  // namespace

BENCHMARK_CAPTURE(kernel_matrix_bench, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(kernel_matrix_bench, openmp, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(monte_carlo_bench, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(monte_carlo_bench, openmp, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
