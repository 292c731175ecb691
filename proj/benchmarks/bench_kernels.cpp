#include <benchmark/benchmark.h>

#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/ensemble.hpp"
#include "sburgers/ergodic.hpp"
#include "sburgers/integrator.hpp"
#include "sburgers/random.hpp"
#include "sburgers/sine_transform.hpp"

using namespace sburgers;

namespace {

SimConfig sized(int n) {
    SimConfig cfg;
    cfg.n = n;
    return cfg;
}

}  // namespace

static void BM_SineForward(benchmark::State& state) {
    const Grid grid = Grid::make(32.0, static_cast<int>(state.range(0)));
    const SineTransform tr(grid);
    const Field u = gaussian_initial(grid);
    std::vector<double> c(static_cast<std::size_t>(grid.size()));
    for (auto _ : state) {
        tr.forward(u.values(), c);
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_SineForward)->Arg(511)->Arg(2047)->Arg(4095);

static void BM_Convection(benchmark::State& state) {
    const Grid grid = Grid::make(32.0, static_cast<int>(state.range(0)));
    const Field u = gaussian_initial(grid);
    std::vector<double> out(static_cast<std::size_t>(grid.size())), scratch(out.size());
    for (auto _ : state) {
        convection(u.values(), grid.dx(), out, scratch);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_Convection)->Arg(2047);

// One noisy step including the J-mode noise draw.
static void BM_Step(benchmark::State& state) {
    const SimConfig cfg = sized(static_cast<int>(state.range(0)));
    Stepper stepper(cfg);
    const Field u0 = gaussian_initial(cfg.grid());
    std::vector<double> u(u0.values().begin(), u0.values().end()), dW(u.size());
    RandomStream stream(cfg.seed, 0);
    for (auto _ : state) {
        stepper.draw(stream, dW);
        stepper.advance(u, dW);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Arg(511)->Arg(2047)->Arg(4095);

static void BM_Ensemble(benchmark::State& state) {
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.M = 16;
    const Field u0 = gaussian_initial(cfg.grid());
    EnsembleOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Ensemble e = run_ensemble(cfg, u0, opts);
        benchmark::DoNotOptimize(e.trajectories.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.M * cfg.steps());
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_EnergyDistance(benchmark::State& state) {
    const auto size = static_cast<int>(state.range(0));
    EmpiricalMeasure a, b;
    RandomStream rs(0, 1);
    std::vector<double> xi(kObservableDim);
    for (int i = 0; i < 2 * size; ++i) {
        rs.next_normals(xi);
        ObservableVector v{};
        for (std::size_t c = 0; c < kObservableDim; ++c) v[c] = xi[c] + (i < size ? 0.0 : 0.1);
        (i < size ? a : b).samples.push_back(v);
    }
    for (auto _ : state) benchmark::DoNotOptimize(measure_distance(a, b));
}
BENCHMARK(BM_EnergyDistance)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
