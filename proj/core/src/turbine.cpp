#include "frtsim/turbine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frtsim/errors.hpp"

namespace frtsim {

void TurbineParams::validate() const {
  if (!(rho > 0.0)) throw ConfigError("turbine.rho", "must be > 0");
  if (!(blade_length > 0.0)) throw ConfigError("turbine.blade_length", "must be > 0");
  const double area = std::numbers::pi * blade_length * blade_length;
  if (!(std::abs(swept_area - area) <= 1e-9 * area))
    throw ConfigError("turbine.swept_area", "must equal pi * blade_length^2");
  if (!(rated_wind > 0.0)) throw ConfigError("turbine.rated_wind", "must be > 0");
  if (!(rated_power > 0.0)) throw ConfigError("turbine.rated_power", "must be > 0");
  if (!(beta >= 0.0 && beta <= 30.0)) throw ConfigError("turbine.beta", "must lie in [0, 30] deg");
  if (!(v_min > 0.0)) throw ConfigError("turbine.v_min", "must be > 0");
  if (!(omega_floor > 0.0)) throw ConfigError("turbine.omega_floor", "must be > 0");
}

TurbineParams TurbineParams::with_blade_length(double length) {
  TurbineParams p;
  p.blade_length = length;
  p.swept_area = std::numbers::pi * length * length;
  return p;
}

double tip_speed_ratio(double omega_t, double blade_length, double wind, double v_min) {
  if (!std::isfinite(omega_t) || !std::isfinite(blade_length) || !std::isfinite(wind))
    throw InvalidInput("tip_speed_ratio: non-finite input");
  if (wind <= v_min) throw CutOffError("wind speed " + std::to_string(wind) + " m/s below cut-off");
  if (omega_t < 0.0) throw InvalidInput("tip_speed_ratio: negative rotor speed");
  return omega_t * blade_length / wind;
}

double power_coefficient(double lambda, double beta_deg, const CpModel& m) {
  if (!std::isfinite(lambda) || !std::isfinite(beta_deg))
    throw InvalidInput("power_coefficient: non-finite input");
  if (lambda <= 0.0) throw InvalidInput("power_coefficient: lambda must be > 0");
  const double inv_li =
      1.0 / (lambda + 0.08 * beta_deg) - 0.035 / (beta_deg * beta_deg * beta_deg + 1.0);
  const double cp = m.c1 * (m.c2 * inv_li - m.c3 * beta_deg - m.c4) * std::exp(-m.c5 * inv_li) +
                    m.c6 * lambda;
  return std::clamp(cp, 0.0, kBetzLimit);
}

double mechanical_power(const TurbineParams& p, double wind, double cp) {
  return 0.5 * p.rho * p.swept_area * wind * wind * wind * cp;
}

ShaftTorque mechanical_torque(double power, double omega_t, double omega_floor) {
  if (omega_t <= omega_floor) return {power / omega_floor, true};
  return {power / omega_t, false};
}

CpOptimum optimal_tip_speed_ratio(const CpModel& m, double beta_deg) {
  CpOptimum best;
  constexpr int kSteps = 150000;
  for (int k = 1; k <= kSteps; ++k) {
    const double lambda = 15.0 * k / kSteps;
    const double cp = power_coefficient(lambda, beta_deg, m);
    if (cp > best.cp) best = {lambda, cp};
  }
  return best;
}

TurbineDrive turbine_drive(const TurbineParams& p, double gear_ratio, double wind,
                           double omega_generator_mech) {
  TurbineDrive out;
  if (wind <= p.v_min) {
    out.cut_off = true;
    return out;
  }
  const double omega_t = std::max(omega_generator_mech / gear_ratio, 0.0);
  out.lambda = tip_speed_ratio(omega_t, p.blade_length, wind, p.v_min);
  out.cp = out.lambda > 0.0 ? power_coefficient(out.lambda, p.beta, p.cp) : 0.0;
  double power = mechanical_power(p, wind, out.cp);
  if (power > p.rated_power) {
    power = p.rated_power;
    out.power_limited = true;
  }
  out.power = power;
  const ShaftTorque shaft = mechanical_torque(power, omega_t, p.omega_floor);
  out.startup = shaft.startup;
  out.generator_torque = shaft.torque / gear_ratio;
  return out;
}

}  // namespace frtsim
