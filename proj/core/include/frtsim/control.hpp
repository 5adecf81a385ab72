#pragma once

#include "frtsim/frames.hpp"
#include "frtsim/statcom.hpp"

namespace frtsim {

struct PiGains {
  double k_p{0.0};
  double k_i{0.0};
  double out_min{-1.0};
  double out_max{1.0};

  void validate(const char* key) const;
};

struct PiState {
  double integral{0.0};  // accumulated error * s
  bool saturated{false};
};

struct PiLimits {
  double lo;
  double hi;
};

struct PiOutput {
  double value{0.0};
  bool saturated{false};
};

/// Clamped k_p e + k_i integral.
PiOutput pi_output(const PiGains& g, double integral, double error, PiLimits lim);

/// d(integral)/dt with conditional integration: zero while the output is
/// saturated and the error would drive it further past the limit.
double pi_integral_rate(const PiGains& g, double integral, double error, PiLimits lim);

/// One forward-Euler step of the same law; updates `state` in place.
double pi_step(const PiGains& g, PiState& state, double error, double dt);
double pi_step(const PiGains& g, PiState& state, double error, double dt, PiLimits lim);

/// Synchronous-reference-frame PLL. The loop filter acts on v_q / |v| so the
/// gains do not depend on the bus voltage level.
struct PllParams {
  double k_p{84.85};             // rad/s per unit of normalised error
  double k_i{3600.0};            // rad/s^2
  double omega_nominal{2.0 * std::numbers::pi * 50.0};
  double v_nominal{66e3};        // V, dq magnitude of a healthy bus
  double lock_threshold{0.1};    // fraction of v_nominal below which the PLL coasts

  double omega_min() const { return 0.5 * omega_nominal; }
  double omega_max() const { return 1.5 * omega_nominal; }
  void validate() const;
};

struct PllState {
  Angle theta{};
  double omega_hat{2.0 * std::numbers::pi * 50.0};
  double integral{0.0};  // rad/s, deviation of the loop filter from nominal
  bool coasting{false};
};

/// Advances the PLL by dt given the bus voltage expressed in its own frame.
PllState pll_step(const Vec2& v_dq, const PllState& s, double dt, const PllParams& p);

struct ControlReferences {
  double v_dcref{140e3};  // V
  double v_ref{1.0};      // p.u. PCC voltage magnitude target
};

struct LoopState {
  PiState dc;
  PiState ac;
};

/// Outer DC-voltage loop. Positive i_dref imports real power to charge the link.
double dc_voltage_loop(const ControlReferences& refs, double v_dc, const PiGains& g, PiState& s,
                       double dt, double i_limit);

/// Outer AC-voltage loop. Positive i_qref is capacitive (voltage-boosting).
double ac_voltage_loop(double v_ref, double v_g, const PiGains& g, PiState& s, double dt,
                       double headroom);

struct CurrentReferences {
  double i_dref{0.0};
  double i_qref{0.0};
  bool d_curtailed{false};
};

/// Reactive-priority limiting: i_q is clipped to i_limit first, then i_d to
/// sqrt(i_limit^2 - i_q^2).
CurrentReferences limit_references(double i_dref, double i_qref, double i_limit);

/// Maps (i_dref, i_qref) to the filter-current target in the converter's
/// injection convention.
inline Vec2 converter_current_target(double i_dref, double i_qref) { return {-i_dref, -i_qref}; }

struct CurrentLoopState {
  PiState d;
  PiState q;
};

/// Feed-forward part of the inner loop: v_pcc - omega l_f J i_t cancels the
/// filter cross-coupling.
Vec2 current_loop_feedforward(const Vec2& i_t, const Vec2& v_pcc, double omega,
                              const StatcomParams& p);

/// Inner dq current loop: per-axis PI on (i_ref - i_t) plus decoupling and
/// grid-voltage feed-forward.
Vec2 current_loop(const Vec2& i_ref, const Vec2& i_t, const Vec2& v_pcc, double omega,
                  const StatcomParams& p, const PiGains& g, CurrentLoopState& s, double dt);

/// Complete gain set of the control stack.
struct ControlGains {
  PiGains dc;
  PiGains ac;
  PiGains current;
  PllParams pll;
  double v_filter_hz{100.0};
};

/// Loop-shaped defaults: inner current loop at `current_bandwidth_hz` (k_p =
/// l_f w, k_i = r_f w), outer loops a decade slower.
/// `ac_plant_gain` is d|v_pcc|(p.u.)/d i_q (A), usually the Thevenin reactance
/// seen from the bus divided by the nominal voltage.
ControlGains tune_default_gains(const StatcomParams& p, const ControlReferences& refs,
                                double ac_plant_gain, double current_bandwidth_hz = 500.0);

}  // namespace frtsim
