#pragma once

#include <array>
#include <complex>

#include "frtsim/frames.hpp"

namespace frtsim {

/// (d stator, q stator, d rotor, q rotor)
using Vec4 = std::array<double, 4>;

/// Squirrel-cage machine parameters in SI units. Resistances and inductances
/// are per phase in the power-invariant dq frame.
struct ScigParams {
  double r_s{0.01};       // ohm
  double r_r{0.01};       // ohm
  double l_s{0.041};      // H
  double l_r{0.041};      // H
  double l_m{0.035};      // H
  int poles{4};
  double inertia_constant{64.0};  // s W/VA
  double inertia{0.0};            // kg m^2; 0 derives it from inertia_constant
  double rated_voltage{500.0};    // V line-line rms
  double rated_power{1.5e6};      // W
  double power_factor{0.85};
  double base_omega{2.0 * std::numbers::pi * 50.0};  // rad/s

  double rated_va() const { return rated_power / power_factor; }
  double synchronous_mech_speed() const { return 2.0 * base_omega / poles; }
  /// J = 2 H S / omega_m^2 unless an explicit inertia is configured.
  double effective_inertia() const;
  double determinant() const { return l_s * l_r - l_m * l_m; }

  void validate() const;

  /// Impedances referred from one voltage level to another: r, l scale by (to/from)^2.
  ScigParams referred(double from_voltage, double to_voltage) const;
  /// Adds a series branch (e.g. transformer leakage) to the stator.
  ScigParams with_stator_series(double resistance, double inductance) const;
};

struct MachineState {
  Vec4 psi{};          // Wb
  double omega_r{0.0};  // electrical rad/s
};

struct MachineInput {
  Vec2 v_s{};           // stator voltage, V
  double t_m{0.0};      // load torque, N m; negative when the shaft drives the machine
  double omega{0.0};    // dq frame speed, rad/s
};

/// L^{-1} psi for the block inductance matrix [[l_s I, l_m I], [l_m I, l_r I]].
Vec4 currents_from_fluxes(const Vec4& psi, const ScigParams& p);

/// L i
Vec4 fluxes_from_currents(const Vec4& i, const ScigParams& p);

/// F(omega, omega_r) psi - N i + v
Vec4 flux_derivative(const MachineState& s, const MachineInput& u, const ScigParams& p);

/// Air-gap torque, positive when motoring: -(p/2) l_m (i_dqs^T J i_dqr).
double electromagnetic_torque(const Vec4& i, const ScigParams& p);

/// (p/J)(T_e - T_m)
double rotor_acceleration(double t_e, double t_m, const ScigParams& p);

/// Steady-state torque from the Thevenin-reduced equivalent circuit at the
/// given slip and line-line voltage magnitude (motoring positive).
double steady_state_torque_slip(const ScigParams& p, double v_mag, double slip);

/// Phasor steady state at fixed slip, solved on the complex two-port.
struct MachineSteadyState {
  Vec4 psi{};
  Vec4 current{};
  double torque{0.0};
};
MachineSteadyState steady_state(const ScigParams& p, const Vec2& v_s, double omega, double omega_r);

/// Slip where the equivalent-circuit torque equals `torque` on the stable branch
/// (between zero slip and the pull-out slip of the same sign).
double slip_for_torque(const ScigParams& p, double v_mag, double torque);

/// Pull-out slip of the given sign (brute-force scan of the analytic curve).
double pull_out_slip(const ScigParams& p, double v_mag, double sign);

/// Stored magnetic energy 0.5 i^T L i, J.
double magnetic_energy(const Vec4& i, const ScigParams& p);

}  // namespace frtsim
