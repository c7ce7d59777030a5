// Serial reference vs OpenMP kernels on the same inputs. Arg 0 = serial,
// 1 = parallel.

#include <benchmark/benchmark.h>

#include "photon_ur/field_synthesis.hpp"
#include "photon_ur/functionals.hpp"
#include "photon_ur/variational.hpp"

using namespace photon_ur;

namespace {

Exec policy(const benchmark::State &state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

const MomentumGrid &reference_grid() {
  static const MomentumGrid grid = build_grid(64, 48, 32, 1.0);
  return grid;
}

void BM_norm(benchmark::State &state) {
  const auto amps = saturating_amplitude(Axis::z, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(norm_squared(amps, reference_grid(), policy(state)));
}

void BM_delta_r(benchmark::State &state) {
  const auto amps = saturating_amplitude(Axis::x, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        delta_r_cartesian(amps, reference_grid(), PolarizationFrame{},
                          policy(state))
            .value);
}

void BM_delta_p(benchmark::State &state) {
  const auto amps = saturating_amplitude(Axis::y, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(delta_p(amps, reference_grid(), policy(state)));
}

void BM_residual(benchmark::State &state) {
  const auto amps = saturating_amplitude(Axis::z, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        pde_residual(amps, 4.0, 1, reference_grid(), policy(state)));
}

void BM_synthesis(benchmark::State &state) {
  static const MomentumGrid grid =
      build_grid(64, 96, 96, 1.0, RadialRule::truncated);
  const auto amps = saturating_amplitude(Axis::z, 1.0);
  const auto box = uniform_box(4.0, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        synthesize_field(amps, grid, PolarizationFrame{}, box, 0.4,
                         policy(state))
            .values.data());
  state.counters["points"] = static_cast<double>(box.points.size());
}

} // namespace

BENCHMARK(BM_norm)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_delta_r)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_delta_p)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residual)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesis)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
