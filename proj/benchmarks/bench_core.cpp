#include <benchmark/benchmark.h>

#include <cmath>

#include "relhartree/analysis.hpp"
#include "relhartree/dynamics.hpp"
#include "relhartree/lp.hpp"
#include "relhartree/potential.hpp"
#include "relhartree/propagator.hpp"
#include "relhartree/rng.hpp"
#include "relhartree/spectral.hpp"

using namespace relhartree;

namespace {

Field gaussian_field(const std::shared_ptr<const Grid>& g, double width, double amp) {
    Field f(g, Space::physical);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = amp * std::exp(-norm2(g->coord_at(i)) * inv2w2);
    return f;
}

} // namespace

static void BM_ForwardTransform(benchmark::State& state) {
    auto g = make_grid(int(state.range(0)), 64.0);
    const Field f = gaussian_field(g, 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(to_spectral(f));
    state.SetItemsProcessed(state.iterations() * long(g->size()));
}
BENCHMARK(BM_ForwardTransform)->Arg(256)->Arg(512);

static void BM_RieszConvolve(benchmark::State& state) {
    auto g = make_grid(int(state.range(0)), 64.0);
    const Field q = modulus_squared(gaussian_field(g, 1.0, 1.0));
    const PotentialParams p(1.5);
    const auto table = riesz_symbol_table(*g, p);
    for (auto _ : state) benchmark::DoNotOptimize(riesz_convolve_with_table(q, table, p));
}
BENCHMARK(BM_RieszConvolve)->Arg(256)->Arg(512);

static void BM_HalfWave(benchmark::State& state) {
    auto g = make_grid(int(state.range(0)), 64.0);
    const Field f = gaussian_field(g, 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(half_wave(f, 0.5));
}
BENCHMARK(BM_HalfWave)->Arg(256);

static void BM_LpProject(benchmark::State& state) {
    auto g = make_grid(256, 64.0);
    const Field f = to_spectral(gaussian_field(g, 1.0, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(lp_project(f, 1.0));
}
BENCHMARK(BM_LpProject);

static void BM_StrangStep(benchmark::State& state) {
    SimConfig cfg;
    cfg.n = int(state.range(0));
    cfg.extent = 64.0;
    cfg.potential = PotentialParams(1.5, 1.0);
    cfg.initial.amplitude = 0.05;
    cfg.initial.declared_radius = 3.5;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    cfg.allow_wrap = true;
    Engine eng(cfg);
    SimState s = eng.initial_state();
    for (auto _ : state) {
        s = eng.strang_step(s);
        benchmark::DoNotOptimize(s.u);
    }
}
BENCHMARK(BM_StrangStep)->Arg(256)->Arg(512);

static void BM_NullStructureSampler(benchmark::State& state) {
    analysis::SamplerSpec spec;
    spec.seed = 7;
    for (auto _ : state)
        benchmark::DoNotOptimize(analysis::verify_null_structure(spec, state.range(0)));
}
BENCHMARK(BM_NullStructureSampler)->Arg(10000);

BENCHMARK_MAIN();
