#include <nlohmann/json.hpp>

#include "frtsim_cli/cli.hpp"

namespace frtsim::cli {

using json = nlohmann::ordered_json;

namespace {

/// JSON has no representation for infinities or NaN.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ScenarioOutcome evaluate_scenario(const Scenario& sc) {
  ScenarioOutcome o;
  o.result = run_scenario(sc);
  if (!o.result.series.empty()) {
    o.metrics = compute_metrics(o.result.series, sc.fault, o.result.diverged);
    o.verdict = grid_code_check(o.result.series, sc.envelope, sc.fault);
  } else {
    o.metrics.diverged = o.result.diverged;
    o.verdict.pass = false;
    o.verdict.complete = false;
  }
  return o;
}

std::string report_json(const ScenarioConfig& cfg, const ScenarioOutcome& o, unsigned seed) {
  const ScenarioResult& r = o.result;
  const Metrics& m = o.metrics;
  json j;
  j["tool"] = "frtsim";
  j["version"] = version();
  j["scenario"] = r.name;
  j["seed"] = seed;
  j["statcom_enabled"] = r.statcom_enabled;
  j["expect_unstable"] = r.expect_unstable;
  j["outcome"] = !r.diverged ? "completed" : (r.expect_unstable ? "diverged_expected" : "diverged_unexpected");
  j["steps"] = r.steps;
  j["samples"] = r.series.size();
  j["realized_fault_window"] = {r.realized_fault_start, r.realized_fault_end};
  j["metrics"] = {{"v_max_pu", num(m.v_max)},
                  {"v_min_pu", num(m.v_min)},
                  {"overvoltage_percent", num(m.overvoltage_percent)},
                  {"max_deviation_pu", num(m.max_deviation)},
                  {"post_fault_max_deviation_pu", num(m.post_fault_max_deviation)},
                  {"fault_min_voltage_pu", num(m.fault_min_voltage)},
                  {"recovery_time_s", num(m.recovery_time)},
                  {"settling_time_2pct_s", num(m.settling_time)},
                  {"peak_statcom_q_var", num(m.peak_statcom_q)},
                  {"post_fault_mean_statcom_q_var", num(m.post_fault_mean_statcom_q)},
                  {"post_fault_mean_grid_q_var", num(m.post_fault_mean_grid_q)},
                  {"post_fault_grid_q_range_var", {num(m.post_fault_min_grid_q), num(m.post_fault_max_grid_q)}},
                  {"mean_grid_p_w", num(m.mean_grid_p)},
                  {"diverged", m.diverged}};
  json violations = json::array();
  for (const auto& v : o.verdict.violations) {
    if (violations.size() >= 50) break;
    violations.push_back({{"time", v.time}, {"region", v.region}, {"voltage_pu", v.voltage}, {"bound_pu", v.bound},
                          {"margin_pu", v.margin}});
  }
  j["grid_code"] = {{"pass", o.verdict.pass},
                    {"complete", o.verdict.complete},
                    {"samples_checked", o.verdict.samples_checked},
                    {"min_margin_pu", num(o.verdict.min_margin)},
                    {"violation_count", o.verdict.violations.size()},
                    {"violations", violations}};
  json events = json::array();
  for (const auto& e : r.events) events.push_back({{"time", e.time}, {"kind", e.kind}, {"detail", e.detail}});
  j["events"] = events;
  if (r.diverged) j["divergence_time"] = r.divergence_time;
  json lv = json::array();
  for (const auto& v : r.limit_violations)
    lv.push_back({{"time", v.time}, {"quantity", v.quantity}, {"value", v.value}, {"limit", v.limit}});
  j["limit_checks"] = {{"evaluated", r.limit_checks}, {"violations", r.limit_violation_count}, {"first", lv}};
  const EnergyAudit& e = r.energy;
  j["energy_j"] = {{"source", e.source},
                   {"mechanical", e.mechanical},
                   {"load", e.load},
                   {"fault", e.fault},
                   {"grid_loss", e.grid_loss},
                   {"machine_copper", e.machine_copper},
                   {"filter_loss", e.filter_loss},
                   {"dc_loss", e.dc_loss},
                   {"stored_change", e.stored_change},
                   {"mismatch", e.mismatch()},
                   {"throughput", e.throughput()},
                   {"relative_mismatch", e.relative_mismatch()}};
  const ModelSetup& s = r.setup;
  auto pi = [](const PiGains& g) { return json{{"k_p", g.k_p}, {"k_i", g.k_i}}; };
  j["derived"] = {{"gear_ratio", s.gear_ratio},
                  {"inertia_kg_m2", s.inertia},
                  {"transformer_leakage_h", s.leakage_inductance},
                  {"voltage_ratio", s.ratio},
                  {"gains", {{"dc", pi(s.gains.dc)}, {"ac", pi(s.gains.ac)}, {"current", pi(s.gains.current)}}}};
  j["config"] = json::parse(serialize_config(cfg));
  return j.dump(2) + "\n";
}

}  // namespace frtsim::cli
