// Serial reference versus OpenMP kernels for the hot paths: the leapfrog
// sweep, the asymptotic field superposition, the Green quadrature and
// surface sampling. Run with --benchmark_filter=... to cut it down.

#include <benchmark/benchmark.h>

#include "latwave/dispersion.hpp"
#include "latwave/greens.hpp"
#include "latwave/transient.hpp"

using namespace latwave;

namespace {

SimConfig bench_config(int half) {
  SimConfig cfg;
  cfg.half_size = half;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  cfg.drive_omega = std::sqrt(2.0);
  cfg.drive_P = {1.0, 0.0};
  return cfg;
}

void sweep_serial(benchmark::State& state) {
  const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
  SimState sim(cfg);
  for (auto _ : state) sim.step(cfg, false);
  state.SetItemsProcessed(state.iterations() * sim.side() * sim.side());
}

void sweep_parallel(benchmark::State& state) {
  const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
  SimState sim(cfg);
  for (auto _ : state) sim.step(cfg, true);
  state.SetItemsProcessed(state.iterations() * sim.side() * sim.side());
}

void sweep_reference(benchmark::State& state) {
  const SimConfig cfg = bench_config(static_cast<int>(state.range(0)));
  SimState sim(cfg);
  for (auto _ : state) sim.step_reference(cfg);
  state.SetItemsProcessed(state.iterations() * sim.side() * sim.side());
}

void field_superposition(benchmark::State& state, bool parallel) {
  const auto carriers = resonance_carriers(3);
  const Displacement2 P{1.0, 0.0};
  for (auto _ : state) {
    AsymptoticField f = total_field(carriers, 3, P, 400.0,
                                    static_cast<int>(state.range(0)), 1e-3, parallel);
    benchmark::DoNotOptimize(f.values.data());
  }
}

void field_serial(benchmark::State& state) { field_superposition(state, false); }
void field_parallel(benchmark::State& state) { field_superposition(state, true); }

void green_quadrature(benchmark::State& state, bool parallel) {
  const Displacement2 P{1.0, 0.0};
  for (auto _ : state) {
    Displacement2 g = nonresonant_green(3.0, P, {4, 2}, static_cast<int>(state.range(0)),
                                        parallel);
    benchmark::DoNotOptimize(g.x);
  }
}

void green_serial(benchmark::State& state) { green_quadrature(state, false); }
void green_parallel(benchmark::State& state) { green_quadrature(state, true); }

void surface_serial(benchmark::State& state) {
  for (auto _ : state) {
    SurfaceGrid g = sample_surface(1, static_cast<int>(state.range(0)), false);
    benchmark::DoNotOptimize(g.omega.data());
  }
}

void surface_parallel(benchmark::State& state) {
  for (auto _ : state) {
    SurfaceGrid g = sample_surface(1, static_cast<int>(state.range(0)), true);
    benchmark::DoNotOptimize(g.omega.data());
  }
}

} // namespace

BENCHMARK(sweep_reference)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep_serial)->Arg(120)->Arg(360)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep_parallel)->Arg(120)->Arg(360)->Unit(benchmark::kMillisecond);
BENCHMARK(field_serial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(field_parallel)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(green_serial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(green_parallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(surface_serial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(surface_parallel)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
