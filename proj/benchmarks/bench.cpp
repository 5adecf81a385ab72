#include <benchmark/benchmark.h>

#include <array>

#include "frtsim/config.hpp"
#include "frtsim/scenario.hpp"

using namespace frtsim;

static void BM_ParkRoundTrip(benchmark::State& state) {
  double theta = 0.0;
  for (auto _ : state) {
    const ThreePhase x = inverse_park(Angle(theta), park(Angle(theta), {1.0, -0.5, -0.5}));
    benchmark::DoNotOptimize(x);
    theta += 1e-3;
  }
}
BENCHMARK(BM_ParkRoundTrip);

static void BM_PccSolve(benchmark::State& state) {
  const NetworkParams p;
  const Admittance y = build_admittance(p, state.range(0) != 0);
  const std::array<Vec2, 2> inj{Vec2{-120.0, 40.0}, Vec2{5.0, -300.0}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_pcc_voltage(y, inj, {p.grid_voltage, 0.0}, p));
}
BENCHMARK(BM_PccSolve)->Arg(0)->Arg(1);

static void BM_CompositeRk4Step(benchmark::State& state) {
  const Scenario sc = default_config().scenario;
  const CompositeModel model(sc, prepare_model(sc));
  StateVector x = model.initial_state();
  double t = 0.0;
  for (auto _ : state) {
    x = rk4_step([&](double tt, const StateVector& s) { return model.derivative(tt, s, false); }, x, t, 1e-4);
    t += 1e-4;
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_CompositeRk4Step);

static void BM_FaultScenario(benchmark::State& state) {
  Scenario sc = default_config().scenario;
  sc.statcom_enabled = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc));
}
BENCHMARK(BM_FaultScenario)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
