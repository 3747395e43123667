#include "lsbound/empirical.hpp"
#include "lsbound/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace lsbound;

namespace {

static void BM_LpNormGrid(benchmark::State& state) {
    std::vector<double> v(4096);
    Rng rng(1);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    const double p = state.range(0) / 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(lp_norm_grid(v, 1e-3, p));
}
BENCHMARK(BM_LpNormGrid)->Arg(3)->Arg(4)->Arg(6);

static void BM_SimulateRealization(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Kernel K = kernel_by_name("box", 1, 1.0 / 16.0);
    const WeightFunction w = kernel_weight(K, {0.1}, 1.0 / (n * 0.1), "w");
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    Simulator sim({w}, f, ProcessKind::xi, n, Grid1(-0.06, 1.06, 1024));
    Simulator::Workspace ws;
    std::vector<double> proc;
    std::uint64_t rep = 0;
    for (auto _ : state) {
        sim.draw(7, rep++, ws);
        sim.evaluate(0, ws, proc);
        benchmark::DoNotOptimize(sim.grid_norm(proc, 3.0));
    }
}
BENCHMARK(BM_SimulateRealization)->Arg(200)->Arg(1000)->Arg(4000);

static void BM_CoveringNumber(benchmark::State& state) {
    const auto m = static_cast<size_t>(state.range(0));
    FiniteParamSpace sp;
    sp.weights.resize(m);
    std::vector<double> pts(m);
    Rng rng(3);
    for (auto& x : pts) x = rng.uniform(0.0, 1.0);
    sp.dist = [pts](size_t i, size_t j) { return std::abs(pts[i] - pts[j]); };
    for (auto _ : state) benchmark::DoNotOptimize(covering_number(sp, 0.07).count);
}
BENCHMARK(BM_CoveringNumber)->Arg(16)->Arg(48)->Arg(120);

static void BM_SigmaS(benchmark::State& state) {
    const Kernel K = kernel_by_name("box", 1, 0.0);
    const WeightFunction w = kernel_weight(K, {0.1}, 0.1, "w");
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    QuadratureConfig quad;
    quad.pts_per_dim = static_cast<int>(state.range(0));
    quad.refine_check = false;
    for (auto _ : state) benchmark::DoNotOptimize(sigma_s(w, f, 3.0, quad));
}
BENCHMARK(BM_SigmaS)->Arg(256)->Arg(512)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
