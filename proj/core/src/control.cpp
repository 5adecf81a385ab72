#include "frtsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frtsim/errors.hpp"

namespace frtsim {

void PiGains::validate(const char* key) const {
  const std::string k(key);
  if (!(k_p >= 0.0)) throw ConfigError(k + ".k_p", "must be >= 0");
  if (!(k_i >= 0.0)) throw ConfigError(k + ".k_i", "must be >= 0");
  if (!(out_min < out_max)) throw ConfigError(k + ".out_min", "must be < out_max");
}

PiOutput pi_output(const PiGains& g, double integral, double error, PiLimits lim) {
  const double u = g.k_p * error + g.k_i * integral;
  if (u >= lim.hi) return {lim.hi, true};
  if (u <= lim.lo) return {lim.lo, true};
  return {u, false};
}

double pi_integral_rate(const PiGains& g, double integral, double error, PiLimits lim) {
  const double u = g.k_p * error + g.k_i * integral;
  if ((u >= lim.hi && error > 0.0) || (u <= lim.lo && error < 0.0)) return 0.0;
  return error;
}

double pi_step(const PiGains& g, PiState& state, double error, double dt) {
  return pi_step(g, state, error, dt, {g.out_min, g.out_max});
}

double pi_step(const PiGains& g, PiState& state, double error, double dt, PiLimits lim) {
  if (!(dt > 0.0)) throw InvalidInput("pi_step: dt must be > 0");
  const double candidate = state.integral + error * dt;
  const double u = g.k_p * error + g.k_i * candidate;
  const bool pushes_high = u > lim.hi && error > 0.0;
  const bool pushes_low = u < lim.lo && error < 0.0;
  if (!pushes_high && !pushes_low) {
    state.integral = candidate;
  } else if (g.k_i > 0.0) {
    // Let the integral reach the limit but never move past it.
    const double edge = ((pushes_high ? lim.hi : lim.lo) - g.k_p * error) / g.k_i;
    state.integral = pushes_high ? std::max(state.integral, edge) : std::min(state.integral, edge);
  }
  const PiOutput out = pi_output(g, state.integral, error, lim);
  state.saturated = out.saturated;
  return out.value;
}

void PllParams::validate() const {
  if (!(k_p >= 0.0)) throw ConfigError("control.pll.k_p", "must be >= 0");
  if (!(k_i >= 0.0)) throw ConfigError("control.pll.k_i", "must be >= 0");
  if (!(omega_nominal > 0.0)) throw ConfigError("control.pll.omega_nominal", "must be > 0");
  if (!(v_nominal > 0.0)) throw ConfigError("control.pll.v_nominal", "must be > 0");
  if (!(lock_threshold >= 0.0 && lock_threshold < 1.0))
    throw ConfigError("control.pll.lock_threshold", "must lie in [0, 1)");
}

PllState pll_step(const Vec2& v_dq, const PllState& s, double dt, const PllParams& p) {
  if (!(dt > 0.0)) throw InvalidInput("pll_step: dt must be > 0");
  if (!v_dq.finite()) throw InvalidInput("pll_step: non-finite voltage");
  PllState next = s;
  const double mag = v_dq.norm();
  if (mag < p.lock_threshold * p.v_nominal) {
    next.coasting = true;
  } else {
    next.coasting = false;
    const double err = v_dq.q / mag;
    next.integral = s.integral + p.k_i * err * dt;
    next.omega_hat = std::clamp(p.omega_nominal + p.k_p * err + next.integral, p.omega_min(),
                                p.omega_max());
  }
  next.theta = Angle(wrap_angle(s.theta.radians() + next.omega_hat * dt));
  return next;
}

double dc_voltage_loop(const ControlReferences& refs, double v_dc, const PiGains& g, PiState& s,
                       double dt, double i_limit) {
  const double lim = std::min({i_limit, std::abs(g.out_min), std::abs(g.out_max)});
  return pi_step(g, s, refs.v_dcref - v_dc, dt, {-lim, lim});
}

double ac_voltage_loop(double v_ref, double v_g, const PiGains& g, PiState& s, double dt,
                       double headroom) {
  const double lim = std::min({headroom, std::abs(g.out_min), std::abs(g.out_max)});
  return pi_step(g, s, v_ref - v_g, dt, {-lim, lim});
}

CurrentReferences limit_references(double i_dref, double i_qref, double i_limit) {
  CurrentReferences out;
  out.i_qref = std::clamp(i_qref, -i_limit, i_limit);
  const double d_room = std::sqrt(std::max(i_limit * i_limit - out.i_qref * out.i_qref, 0.0));
  out.i_dref = std::clamp(i_dref, -d_room, d_room);
  out.d_curtailed = out.i_dref != i_dref;
  return out;
}

Vec2 current_loop_feedforward(const Vec2& i_t, const Vec2& v_pcc, double omega,
                              const StatcomParams& p) {
  return v_pcc - omega * p.l_f * SkewJ::apply(i_t);
}

Vec2 current_loop(const Vec2& i_ref, const Vec2& i_t, const Vec2& v_pcc, double omega,
                  const StatcomParams& p, const PiGains& g, CurrentLoopState& s, double dt) {
  const double ud = pi_step(g, s.d, i_ref.d - i_t.d, dt);
  const double uq = pi_step(g, s.q, i_ref.q - i_t.q, dt);
  return current_loop_feedforward(i_t, v_pcc, omega, p) + Vec2{ud, uq};
}

ControlGains tune_default_gains(const StatcomParams& p, const ControlReferences& refs,
                                double ac_plant_gain, double current_bandwidth_hz) {
  const double w_bw = 2.0 * std::numbers::pi * current_bandwidth_hz;
  const double w_outer = w_bw / 10.0;
  ControlGains g;

  const double u_max = p.modulation_limit * p.v_dc_rated;
  g.current = {p.l_f * w_bw, p.r_f * w_bw, -u_max, u_max};

  // dv_dc/dt ~= v_ac * i_dref / (c_dc v_dc)
  const double dc_plant = p.v_ac_rated / (p.c_dc * refs.v_dcref);
  const double dc_kp = w_outer / dc_plant;
  g.dc = {dc_kp, dc_kp * w_outer / 4.0, -p.i_max, p.i_max};

  const double ac_ki = w_outer / ac_plant_gain;
  g.ac = {0.25 * ac_ki / w_outer, ac_ki, -p.i_max, p.i_max};

  g.pll.v_nominal = p.v_ac_rated;
  return g;
}

}  // namespace frtsim
