#pragma once

#include <cmath>

#include "frtsim/frames.hpp"

namespace frtsim {

/// Averaged shunt converter behind an RL filter, with a capacitive DC link.
struct StatcomParams {
  double l_f{0.0832};          // H
  double r_f{0.523};           // ohm
  double c_dc{100e-6};         // F
  double v_dc_rated{140e3};    // V
  double s_rated{25e6};        // VA
  double v_ac_rated{66e3};     // V line-line rms at the connection bus
  double i_max{25e6 / (1.1 * 66e3)};  // A, dq magnitude
  double r_loss{3.136e5};      // ohm, DC-side parallel loss resistance
  double modulation_limit{0.5 * std::sqrt(1.5)};  // max |v_t| per volt of v_dc
  double v_dc_min_fraction{0.5};  // blocking threshold as a fraction of v_dc_rated

  double v_dc_min() const { return v_dc_min_fraction * v_dc_rated; }
  void validate() const;
};

struct StatcomState {
  Vec2 i_t{};          // A, flowing from converter into the grid
  double v_dc{140e3};  // V
};

/// (1/l_f)(-(r_f I - omega l_f J) i_t + v_t - v)
Vec2 filter_current_derivative(const StatcomState& s, const Vec2& v_t, const Vec2& v,
                               const StatcomParams& p, double omega);

/// Converter AC power v_t . i_t (positive when exporting to the grid).
inline double converter_power(const Vec2& v_t, const Vec2& i_t) { return dot(v_t, i_t); }

/// DC-side loss v_dc^2 / r_loss
inline double dc_loss(double v_dc, const StatcomParams& p) { return v_dc * v_dc / p.r_loss; }

/// (-p_conv - p_loss) / (c_dc v_dc). Throws InvalidInput when v_dc <= v_dc_min;
/// the scenario driver blocks the converter before calling in that regime.
double dc_link_derivative(double v_dc, double p_conv, double p_loss, const StatcomParams& p);

struct ConverterOutput {
  Vec2 v_t{};
  bool saturated{false};
  bool blocked{false};
};

/// Radial clip of the command to modulation_limit * v_dc. A non-positive
/// v_dc is a blocked converter with zero output.
ConverterOutput converter_voltage(const Vec2& command, double v_dc, const StatcomParams& p);

}  // namespace frtsim
