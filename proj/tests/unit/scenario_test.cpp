#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "frtsim/config.hpp"
#include "frtsim/errors.hpp"
#include "frtsim/metrics.hpp"
#include "frtsim/scenario.hpp"

using namespace frtsim;

namespace {

Scenario short_run(double t_end) {
  Scenario sc = default_config().scenario;
  sc.sim.t_end = t_end;
  return sc;
}

double last(const TimeSeries& ts, const std::string& name) { return ts.column(name).back(); }

}  // namespace

TEST(WindProfile, DefaultShape) {
  const WindProfile w;
  EXPECT_EQ(w.at(0.0), 3.0);
  EXPECT_EQ(w.at(0.5), 3.0);
  EXPECT_DOUBLE_EQ(w.at(0.75), 7.5);
  EXPECT_EQ(w.at(1.0), 12.0);
  EXPECT_EQ(w.at(1.9), 12.0);
}

TEST(WindProfile, Validation) {
  WindProfile w;
  w.segments.front().ramp = true;
  EXPECT_THROW(w.validate(), ConfigError);
  w = {};
  w.segments[2].t_start = 0.4;
  EXPECT_THROW(w.validate(), ConfigError);
  w.segments.clear();
  EXPECT_THROW(w.validate(), ConfigError);
}

TEST(ModelSetup, DerivedQuantities) {
  const Scenario sc = default_config().scenario;
  const ModelSetup s = prepare_model(sc);
  EXPECT_NEAR(s.ratio, 66e3 / 5e3, 1e-12);
  EXPECT_NEAR(s.leakage_inductance, 2.7056e-3, 1e-6);
  EXPECT_NEAR(s.machine.l_s, sc.machine.l_s + s.leakage_inductance, 1e-15);
  EXPECT_NEAR(s.inertia, 9154.667, 1e-2);
  // gear ratio puts rated wind at the optimum tip-speed ratio near synchronous speed
  const double omega_t = 8.10012 * 12.0 / sc.turbine.blade_length;
  EXPECT_NEAR(s.gear_ratio * omega_t / sc.machine.synchronous_mech_speed(), 1.0, 0.01);
  EXPECT_NEAR(s.ac_plant_gain, sc.network.thevenin_impedance().imag() / 66e3, 1e-12);
}

TEST(CompositeModel, SteadyInitialStateIsEquilibrium) {
  const Scenario sc = default_config().scenario;
  const CompositeModel model(sc, prepare_model(sc));
  const StateVector x = model.initial_state();
  ASSERT_EQ(x.size(), idx::size);
  const StateVector dx = model.derivative(0.0, x, false);
  const ScigParams& m = model.setup().machine;
  for (std::size_t k = idx::psi; k < idx::psi + 4; ++k) EXPECT_LT(std::abs(dx[k]) / (5000.0), 1e-5) << k;
  EXPECT_LT(std::abs(dx[idx::omega_r]), 1e-4 * m.base_omega);
  EXPECT_LT(std::abs(dx[idx::v_dc]), 1e-3 * sc.references.v_dcref);
  EXPECT_LT(std::abs(dx[idx::pll_phi]), 1e-6);

  const Snapshot s = model.evaluate(0.0, x, false);
  EXPECT_NEAR(s.v_pcc.q, 0.0, 1e-6 * 66e3);
  EXPECT_NEAR(s.v_pcc.norm() / 66e3, 1.0, 0.02);
  EXPECT_FALSE(s.converter_saturated);
}

TEST(CompositeModel, DcLinkReferenceStepSettles) {
  const Scenario sc = default_config().scenario;
  const CompositeModel model(sc, prepare_model(sc));
  StateVector x = model.initial_state();
  const double ref = sc.references.v_dcref;
  x[idx::v_dc] = ref / 1.05;
  const double dt = 1e-4;
  for (int k = 0; k < 2000; ++k) {
    x = rk4_step([&](double t, const StateVector& s) { return model.derivative(t, s, false); }, x, k * dt, dt);
  }
  EXPECT_LT(std::abs(x[idx::v_dc] - ref), 0.02 * ref);
}

TEST(Scenario, NoFaultShortRunStaysFlat) {
  Scenario sc = short_run(0.1);
  sc.fault_enabled = false;
  const ScenarioResult r = run_scenario(sc);
  EXPECT_FALSE(r.diverged);
  EXPECT_EQ(r.series.size(), 101u);
  EXPECT_EQ(r.limit_violation_count, 0u);
  const auto v = r.series.column("v_pcc");
  for (double x : v) EXPECT_NEAR(x, 1.0, 0.02);
  const Metrics m = compute_metrics(r.series, sc.fault, r.diverged);
  EXPECT_EQ(m.recovery_time, 0.0);
}

TEST(Scenario, ZeroWindSettlesToLoadFlow) {
  Scenario sc = short_run(0.2);
  sc.fault_enabled = false;
  sc.statcom_enabled = false;
  sc.wind.segments = {{0.0, 0.0, false}};
  const ScenarioResult r = run_scenario(sc);
  ASSERT_FALSE(r.diverged);
  // only the idling machine's losses come on top of the load
  const double p_wecs = last(r.series, "p_wecs");
  EXPECT_LT(p_wecs, 0.0);
  EXPECT_GT(p_wecs, -0.1e6);
  EXPECT_EQ(last(r.series, "q_statcom"), 0.0);
  const double p_grid = last(r.series, "p_grid");
  EXPECT_GT(p_grid, sc.network.load.real());
  EXPECT_LT(p_grid, sc.network.load.real() + 0.5e6);
}

TEST(Scenario, RealisedFaultWindowUsesStepIndices) {
  Scenario sc = short_run(0.9);
  sc.sim.dt = 3e-4;
  const ScenarioResult r = run_scenario(sc);
  EXPECT_NEAR(r.realized_fault_start, std::llround(0.8 / 3e-4) * 3e-4, 1e-15);
  EXPECT_NEAR(r.realized_fault_end, std::llround(0.82 / 3e-4) * 3e-4, 1e-15);
  const auto f = r.series.column("fault");
  EXPECT_TRUE(std::any_of(f.begin(), f.end(), [](double x) { return x == 1.0; }));
  const bool logged = std::any_of(r.events.begin(), r.events.end(), [](const Event& e) { return e.kind == "fault_start"; });
  EXPECT_TRUE(logged);
}

TEST(Scenario, DivergenceTruncatesSeries) {
  Scenario sc = short_run(1.0);
  sc.sim.divergence_ceiling = 2.0;
  sc.expect_unstable = true;
  const ScenarioResult r = run_scenario(sc);
  EXPECT_TRUE(r.diverged);
  EXPECT_GE(r.divergence_time, 0.8 - 1e-12);
  EXPECT_LT(r.series.size(), 1001u);
  EXPECT_LE(r.series.column("time").back(), r.divergence_time);
  const bool logged = std::any_of(r.events.begin(), r.events.end(), [](const Event& e) { return e.kind == "divergence"; });
  EXPECT_TRUE(logged);
}

TEST(Scenario, Deterministic) {
  const Scenario sc = short_run(0.9);
  const ScenarioResult a = run_scenario(sc);
  const ScenarioResult b = run_scenario(sc);
  EXPECT_EQ(to_csv(a.series), to_csv(b.series));
}

TEST(Scenario, ColdStartRuns) {
  Scenario sc = short_run(0.3);
  sc.fault_enabled = false;
  sc.sim.initialization = Initialization::Cold;
  const ScenarioResult r = run_scenario(sc);
  EXPECT_FALSE(r.diverged);
  EXPECT_LT(r.energy.relative_mismatch(), 1e-3);
}

TEST(Scenario, EnergyAuditOnShortFaultRun) {
  const ScenarioResult r = run_scenario(short_run(0.9));
  ASSERT_FALSE(r.diverged);
  EXPECT_GT(r.energy.fault, 0.0);
  EXPECT_GT(r.energy.load, 0.0);
  EXPECT_LT(r.energy.relative_mismatch(), 1e-3);
}
