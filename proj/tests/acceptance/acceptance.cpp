// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "frtsim/config.hpp"
#include "frtsim/grid_code.hpp"
#include "frtsim/metrics.hpp"
#include "frtsim/scenario.hpp"

using namespace frtsim;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Full default-preset runs shared by criteria 4-7, 9 and 10.
struct PresetRuns {
  Scenario with;
  Scenario without;
  ScenarioResult r_with;
  ScenarioResult r_without;
  Metrics m_with;
  Metrics m_without;
  GridCodeVerdict v_with;
  double seconds_with{0.0};
};

PresetRuns& preset_runs() {
  static PresetRuns runs = [] {
    PresetRuns p;
    p.with = preset_config("paper").scenario;
    p.without = p.with;
    p.without.statcom_enabled = false;
    p.without.name = "paper_no_statcom";
    const auto t0 = std::chrono::steady_clock::now();
    p.r_with = run_scenario(p.with);
    p.seconds_with = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    p.r_without = run_scenario(p.without);
    p.m_with = compute_metrics(p.r_with.series, p.with.fault, p.r_with.diverged);
    p.v_with = grid_code_check(p.r_with.series, p.with.envelope, p.with.fault);
    if (!p.r_without.series.empty())
      p.m_without = compute_metrics(p.r_without.series, p.without.fault, p.r_without.diverged);
    p.m_without.diverged = p.r_without.diverged;
    return p;
  }();
  return runs;
}

Verdict transform_orthogonality() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> th(-100.0, 100.0), val(-10.0, 10.0);
  double worst_orth = 0.0, worst_trip = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Angle a(th(rng));
    // Columns of T are the images of the unit vectors.
    double t[3][3];
    const ThreePhase units[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int c = 0; c < 3; ++c) {
      const DqZero r = park(a, units[c]);
      t[0][c] = r.d;
      t[1][c] = r.q;
      t[2][c] = r.zero;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += t[i][k] * t[j][k];
        worst_orth = std::max(worst_orth, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    const ThreePhase x{val(rng), val(rng), val(rng)};
    const ThreePhase y = inverse_park(a, park(a, x));
    worst_trip = std::max({worst_trip, std::abs(y.a - x.a), std::abs(y.b - x.b), std::abs(y.c - x.c)});
  }
  return {worst_orth < 1e-12 && worst_trip < 1e-12,
          fmt("max |T T^T - I| = %.2e, max round-trip error = %.2e over 1000 angles", worst_orth, worst_trip)};
}

// Machine exactly as the simulator integrates it: 5 kV level, transformer leakage in l_s.
ScigParams model_machine() { return prepare_model(preset_config("paper").scenario).machine; }

Verdict integrator_order() {
  const ScigParams p = model_machine();
  const double w = p.base_omega;
  // Free decay with shorted stator from a loaded operating point, rotor speed free.
  const MachineSteadyState ss = steady_state(p, {5000.0, 0.0}, w, w * 1.01);
  const StateVector x0{ss.psi[0], ss.psi[1], ss.psi[2], ss.psi[3], w * 1.01};
  auto f = [&](double, const StateVector& x) {
    const MachineState s{{x[0], x[1], x[2], x[3]}, x[4]};
    const Vec4 d = flux_derivative(s, {{0.0, 0.0}, 0.0, w}, p);
    const double te = electromagnetic_torque(currents_from_fluxes(s.psi, p), p);
    return StateVector{d[0], d[1], d[2], d[3], rotor_acceleration(te, 0.0, p)};
  };
  const double t_end = 0.2;
  auto solve = [&](double dt) {
    StateVector x = x0;
    const auto n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k < n; ++k) x = rk4_step(f, x, k * dt, dt);
    return x;
  };
  const StateVector ref = solve(1e-6);
  auto err = [&](double dt) {
    const StateVector x = solve(dt);
    double e = 0.0;
    for (std::size_t i = 0; i < 4; ++i) e = std::max(e, std::abs(x[i] - ref[i]));
    return e;
  };
  const double e1 = err(4e-4), e2 = err(2e-4), e3 = err(1e-4);
  const double r1 = e1 / e2, r2 = e2 / e3;
  const bool ok = std::abs(r1 - 16.0) <= 3.0 && std::abs(r2 - 16.0) <= 3.0;
  return {ok, fmt("flux error %.3e / %.3e / %.3e Wb at dt 400/200/100 us, ratios %.2f and %.2f", e1, e2, e3, r1, r2)};
}

Verdict machine_oracle() {
  const ScigParams p = model_machine();
  const double w = p.base_omega, v = 5000.0;
  double worst = 0.0;
  std::string detail;
  for (double slip : {-0.03, -0.02, -0.0125, -0.0075, -0.005}) {
    const double wr = w * (1.0 - slip);
    MachineState s{{0, 0, 0, 0}, wr};
    const MachineInput u{{v, 0.0}, 0.0, w};
    auto f = [&](double, const StateVector& x) {
      const Vec4 d = flux_derivative({{x[0], x[1], x[2], x[3]}, wr}, u, p);
      return StateVector{d[0], d[1], d[2], d[3]};
    };
    // Integrate at fixed rotor speed until the torque stops moving.
    StateVector x(4, 0.0);
    const double dt = 2e-4;
    double te_prev = 0.0, te = 0.0;
    for (int sec = 0; sec < 120; ++sec) {
      for (int k = 0; k < 5000; ++k) x = rk4_step(f, x, 0.0, dt);
      s.psi = {x[0], x[1], x[2], x[3]};
      te = electromagnetic_torque(currents_from_fluxes(s.psi, p), p);
      if (sec > 5 && std::abs(te - te_prev) < 1e-9 * std::abs(te)) break;
      te_prev = te;
    }
    const double analytic = steady_state_torque_slip(p, v, slip);
    const double rel = std::abs(te - analytic) / std::abs(analytic);
    worst = std::max(worst, rel);
    detail += fmt("s=%g: %.1f vs %.1f N m; ", slip, te, analytic);
  }
  return {worst < 0.01, detail + fmt("max relative error %.2e", worst)};
}

Verdict power_balance() {
  const PresetRuns& p = preset_runs();
  const EnergyAudit& e = p.r_with.energy;
  const bool ok = !p.r_with.diverged && e.relative_mismatch() < 1e-3;
  return {ok, fmt("mismatch %.4g J of %.4g J throughput (%.2e relative), run %.2f s", e.mismatch(), e.throughput(),
                  e.relative_mismatch(), p.seconds_with)};
}

Verdict regulation_with_statcom() {
  const PresetRuns& p = preset_runs();
  const Metrics& m = p.m_with;
  const bool ok = !p.r_with.diverged && m.settling_time >= 0.0 && m.settling_time <= 0.2 && p.v_with.pass;
  return {ok, fmt("settled within 2%% %.4f s after clearing, envelope %s (min margin %.4f p.u.), V range [%.4f, %.4f]",
                  m.settling_time, p.v_with.pass ? "pass" : "fail", p.v_with.min_margin, m.v_min, m.v_max)};
}

Verdict deviation_without_statcom() {
  const PresetRuns& p = preset_runs();
  const double dev_without = p.m_without.max_deviation;
  const double dev_with = p.m_with.post_fault_max_deviation;
  const bool large = p.r_without.diverged || dev_without > 0.2;
  const bool ordered = p.r_without.diverged || dev_without >= 3.0 * dev_with;
  return {large && ordered,
          fmt("without: max deviation %.4f p.u.%s, post-fault %.4f; with: post-fault max deviation %.4f; ratio %.2f",
              dev_without, p.r_without.diverged ? " (diverged)" : "", p.m_without.post_fault_max_deviation, dev_with,
              dev_with > 0.0 ? dev_without / dev_with : INFINITY)};
}

Verdict reactive_injection() {
  const PresetRuns& p = preset_runs();
  const Metrics& m = p.m_with;
  const double rating = p.with.statcom.s_rated;
  const bool ok = m.post_fault_mean_grid_q >= 5e6 && m.post_fault_mean_grid_q <= 25e6 && m.peak_statcom_q <= rating;
  return {ok, fmt("post-fault grid Q mean %.2f MVAr (range %.2f..%.2f), peak STATCOM |Q| %.2f MVAr of %.0f rated",
                  m.post_fault_mean_grid_q / 1e6, m.post_fault_min_grid_q / 1e6, m.post_fault_max_grid_q / 1e6,
                  m.peak_statcom_q / 1e6, rating / 1e6)};
}

Verdict grid_code_suite() {
  const FaultSpec f;
  const FrtEnvelope env;
  auto trace = [&](double level) {
    std::vector<double> t, v;
    for (int k = 0; k <= 2000; ++k) {
      const double tt = k / 1000.0;
      const double s = tt - f.t_start;
      t.push_back(tt);
      v.push_back(s < 0.0 ? 1.0 : (s <= env.t0 ? level : std::max(level, env.lower_bound(s) + 0.05)));
    }
    return grid_code_check(t, v, env, f);
  };
  const GridCodeVerdict low = trace(0.10), floor = trace(0.15), high = trace(0.85);
  const bool low_ok = !low.pass && !low.violations.empty() &&
                      std::all_of(low.violations.begin(), low.violations.end(), [](const auto& x) { return x.region == 2; });
  const bool floor_ok = floor.pass && floor.min_margin == 0.0;
  const bool high_ok = high.pass && high.min_margin > 0.0;
  return {low_ok && floor_ok && high_ok,
          fmt("0.10 p.u. -> %s (%zu region-2 violations), 0.15 -> %s (margin %.3f), 0.85 -> %s (margin %.3f)",
              low.pass ? "pass" : "fail", low.violations.size(), floor.pass ? "pass" : "fail", floor.min_margin,
              high.pass ? "pass" : "fail", high.min_margin)};
}

Verdict limit_properties() {
  const PresetRuns& p = preset_runs();
  const ScenarioResult& r = p.r_with;
  std::string first;
  if (!r.limit_violations.empty())
    first = fmt("; first: %s = %g > %g at t=%g", r.limit_violations[0].quantity.c_str(), r.limit_violations[0].value,
                r.limit_violations[0].limit, r.limit_violations[0].time);
  const bool ok = r.limit_checks > 0 && r.limit_violation_count == 0 && !r.diverged;
  return {ok, fmt("%zu violations in %zu inline checks over %zu steps", r.limit_violation_count, r.limit_checks,
                  r.steps) + first};
}

Verdict determinism() {
  const PresetRuns& p = preset_runs();
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioResult again = run_scenario(p.with);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string a = to_csv(p.r_with.series), b = to_csv(again.series);
  const bool ok = a == b && !a.empty();
  return {ok, fmt("%zu bytes, %s; rerun %.2f s", a.size(), a == b ? "byte-identical" : "different", secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"transform orthogonality and round trip", transform_orthogonality},
      {"RK4 convergence order on machine free decay", integrator_order},
      {"dynamic torque matches equivalent-circuit torque-slip", machine_oracle},
      {"energy balance over the fault scenario", power_balance},
      {"voltage regulation with STATCOM", regulation_with_statcom},
      {"deviation without STATCOM", deviation_without_statcom},
      {"reactive injection magnitude", reactive_injection},
      {"grid-code envelope verdicts", grid_code_suite},
      {"controller and current limits", limit_properties},
      {"deterministic CSV output", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
