#include <benchmark/benchmark.h>

#include "tessera/models.hpp"
#include "tessera/power.hpp"
#include "tessera/raster.hpp"

using namespace tessera;

namespace {

Backend backend_of(int64_t v) {
    switch (v) {
        case 0: return Backend::reference;
        case 1: return Backend::serial;
        default: return Backend::parallel;
    }
}

void BM_voronoi2(benchmark::State& state) {
    const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), static_cast<double>(state.range(1)), Seed{1});
    const Backend b = backend_of(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(voronoi(p, b).cells.size());
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.size()));
}
BENCHMARK(BM_voronoi2)->Args({0, 500})->Args({1, 500})->Args({2, 500})->Args({1, 5000})->Args({2, 5000})->Unit(benchmark::kMillisecond);

void BM_voronoi3(benchmark::State& state) {
    const auto p = sample_poisson<3>(Window3::unit(EdgeMode::periodic), static_cast<double>(state.range(1)), Seed{2});
    const Backend b = backend_of(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(voronoi(p, b).cells.size());
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.size()));
}
BENCHMARK(BM_voronoi3)->Args({1, 200})->Args({2, 200})->Args({1, 1000})->Args({2, 1000})->Unit(benchmark::kMillisecond);

void BM_raster_assign(benchmark::State& state) {
    auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{3});
    p.radii.assign(p.size(), 0.01);
    const Backend b = backend_of(state.range(0));
    const int res = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(raster_assign(p, RasterModel::johnson_mehl, res, b).labels.size());
    state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_raster_assign)->Args({1, 256})->Args({2, 256})->Args({1, 1024})->Args({2, 1024})->Unit(benchmark::kMillisecond);

void BM_sweep(benchmark::State& state) {
    const nlohmann::json params{{"lambda", 100.0}};
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_sweep("pv2", params, static_cast<std::size_t>(state.range(0)), 1).replicates);
}
BENCHMARK(BM_sweep)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
