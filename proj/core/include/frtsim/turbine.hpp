#pragma once

#include <numbers>

namespace frtsim {

/// Upper bound on any physically attainable power coefficient.
inline constexpr double kBetzLimit = 0.593;

/// Exponential power-coefficient approximation
///   Cp = c1 (c2/li - c3 beta - c4) exp(-c5/li) + c6 lambda,
///   1/li = 1/(lambda + 0.08 beta) - 0.035/(beta^3 + 1).
struct CpModel {
  double c1{0.5176};
  double c2{116.0};
  double c3{0.4};
  double c4{5.0};
  double c5{21.0};
  double c6{0.0068};
};

struct TurbineParams {
  double rho{1.225};              // kg/m^3
  double blade_length{30.6563};   // m
  double swept_area{std::numbers::pi * 30.6563 * 30.6563};  // m^2, pi L^2
  double rated_power{1.5e6};      // W
  double rated_wind{12.0};        // m/s
  double beta{0.0};               // deg
  double v_min{0.1};              // m/s, cut-off guard
  double omega_floor{0.1};        // rad/s, division guard
  CpModel cp{};

  void validate() const;
  static TurbineParams with_blade_length(double length);
};

/// omega_T L / v. Throws CutOffError when v <= v_min.
double tip_speed_ratio(double omega_t, double blade_length, double wind, double v_min = 0.1);

/// Cp(lambda, beta) clipped to [0, kBetzLimit]. Throws InvalidInput for lambda <= 0.
double power_coefficient(double lambda, double beta_deg, const CpModel& m);

/// 0.5 rho A v^3 cp
double mechanical_power(const TurbineParams& p, double wind, double cp);

struct ShaftTorque {
  double torque{0.0};   // N m
  bool startup{false};  // omega at or below the floor; torque evaluated at the floor speed
};

/// P_m / omega_T, guarded at omega_floor.
ShaftTorque mechanical_torque(double power, double omega_t, double omega_floor = 0.1);

struct CpOptimum {
  double lambda{0.0};
  double cp{0.0};
};

/// Brute-force maximisation of Cp over lambda in (0, 15] at fixed pitch.
CpOptimum optimal_tip_speed_ratio(const CpModel& m, double beta_deg);

/// Aerodynamic drive at the generator shaft through an ideal gearbox, with
/// power limited to rated_power.
struct TurbineDrive {
  double lambda{0.0};
  double cp{0.0};
  double power{0.0};          // W, after limiting
  double generator_torque{0.0};  // N m on the generator shaft, positive = driving
  bool cut_off{false};
  bool power_limited{false};
  bool startup{false};
};

TurbineDrive turbine_drive(const TurbineParams& p, double gear_ratio, double wind,
                           double omega_generator_mech);

}  // namespace frtsim
