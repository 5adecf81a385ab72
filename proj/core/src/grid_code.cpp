#include "frtsim/grid_code.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "frtsim/errors.hpp"

namespace frtsim {

void FrtEnvelope::validate() const {
  if (!(t0 > 0.0)) throw ConfigError("envelope.t0", "must be > 0");
  if (!(t1 >= t0)) throw ConfigError("envelope.t1", "must be >= t0");
  if (!(window_end >= t1)) throw ConfigError("envelope.window_end", "must be >= t1");
  if (!(sag_floor >= 0.0)) throw ConfigError("envelope.sag_floor", "must be >= 0");
  if (!(sag_floor < recovery_level)) throw ConfigError("envelope.sag_floor", "must be < recovery_level");
  if (!(recovery_level <= 1.0)) throw ConfigError("envelope.recovery_level", "must be <= 1");
}

double FrtEnvelope::lower_bound(double s) const {
  if (s < 0.0) return -std::numeric_limits<double>::infinity();
  if (s <= t0) return sag_floor;
  if (s >= t1) return recovery_level;
  return sag_floor + (recovery_level - sag_floor) * (s - t0) / (t1 - t0);
}

int FrtEnvelope::region(double s) const {
  if (s < 0.0) return 1;
  return s <= t0 ? 2 : 3;
}

GridCodeVerdict grid_code_check(std::span<const double> time, std::span<const double> v_pu,
                                const FrtEnvelope& env, const FaultSpec& fault) {
  env.validate();
  if (time.size() != v_pu.size()) throw InvalidInput("grid_code_check: column length mismatch");
  GridCodeVerdict out;
  out.min_margin = std::numeric_limits<double>::infinity();
  const double t_close = fault.t_start + env.window_end;
  for (std::size_t k = 0; k < time.size(); ++k) {
    const double s = time[k] - fault.t_start;
    if (s < 0.0 || time[k] > t_close) continue;
    ++out.samples_checked;
    const double bound = env.lower_bound(s);
    const double margin = v_pu[k] - bound;
    out.min_margin = std::min(out.min_margin, margin);
    if (!(v_pu[k] >= bound)) out.violations.push_back({time[k], v_pu[k], bound, margin, env.region(s)});
  }
  // A trace that stops before the window closes (e.g. after divergence) cannot pass.
  out.complete = !time.empty() && time.back() >= t_close;
  out.pass = out.violations.empty() && out.complete && out.samples_checked > 0;
  if (out.samples_checked == 0) out.min_margin = 0.0;
  return out;
}

GridCodeVerdict grid_code_check(const TimeSeries& ts, const FrtEnvelope& env, const FaultSpec& fault) {
  return grid_code_check(ts.column("time"), ts.column("v_pcc"), env, fault);
}

std::string describe(const EnvelopeViolation& v) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "t=%.6g s region %d: v=%.4f p.u. below bound %.4f (margin %.4f)", v.time,
                v.region, v.voltage, v.bound, v.margin);
  return buf;
}

}  // namespace frtsim
