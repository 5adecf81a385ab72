#pragma once

#include <complex>
#include <span>

#include "frtsim/frames.hpp"

namespace frtsim {

using Complex = std::complex<double>;

struct TransformerParams {
  double hv_voltage{66e3};   // V line-line
  double lv_voltage{500.0};  // V line-line
  double leakage{0.06};      // p.u. reactance on the machine base

  double ratio() const { return hv_voltage / lv_voltage; }
};

/// Single-bus reduction: Thevenin source and line on one side of the PCC,
/// constant-power load and fault shunt at the PCC, devices as current injections.
struct NetworkParams {
  double nominal_voltage{66e3};        // V line-line at the PCC
  double base_power{100e6};            // VA
  double grid_voltage{71.56e3};        // V, Thevenin EMF magnitude
  Complex grid_impedance{0.91921, 38.3961};  // ohm
  Complex line_impedance_per_km{0.12, -2.78};  // ohm/km
  double line_length{10.0};            // km
  TransformerParams transformer{};
  Complex load{80e6, 10e6};            // VA
  double load_collapse_voltage{0.7};   // p.u.; below it the load is a constant impedance
  double fault_resistance{2.5};        // ohm
  int load_max_iterations{50};
  double load_tolerance{1e-9};
  double load_relaxation{0.7};

  Complex line_impedance() const { return line_impedance_per_km * line_length; }
  Complex thevenin_impedance() const { return grid_impedance + line_impedance(); }
  double base_current() const { return base_power / nominal_voltage; }
  void validate() const;
};

/// Grid impedance that yields the requested short-circuit ratio at the PCC
/// (short-circuit power over `s_reference`) for the total Thevenin impedance
/// grid + line, with the given X/R ratio of that total.
Complex grid_impedance_for_scr(double scr, double s_reference, double v_nominal, double x_over_r,
                               Complex line_impedance);

/// Nodal admittance of the reduced network at the PCC. Complex form of the
/// 2x2 real dq block [[G, -B], [B, G]].
struct Admittance {
  Complex source{};  // 1 / (Z_grid + Z_line)
  Complex shunt{};   // fault shunt (0 when inactive)
  Complex self() const { return source + shunt; }

  struct Block {
    double m[2][2];
  };
  Block block() const;
};

Admittance build_admittance(const NetworkParams& p, bool fault_active);

/// Current drawn by the constant-power load: conj(S / v) in the power-invariant
/// frame. Below the collapse voltage the load is the constant admittance that
/// draws S at exactly the collapse voltage.
struct LoadCurrent {
  Vec2 current{};
  bool impedance_mode{false};
};
LoadCurrent constant_power_load_current(Complex s_load, const Vec2& v_pcc, double collapse_voltage);

struct PccSolution {
  Vec2 v_pcc{};
  Vec2 grid_current{};   // from the grid branch into the PCC
  Vec2 load_current{};
  Vec2 fault_current{};
  int iterations{0};
  bool load_impedance_mode{false};
  bool fallback{false};  // fixed point did not converge; impedance linearisation used
  double kcl_residual{0.0};  // A
};

/// Solves the PCC voltage for the source EMF phasor `emf` (already expressed
/// in the simulation frame) and the device current injections.
PccSolution solve_pcc_voltage(const Admittance& y, std::span<const Vec2> injections,
                              const Vec2& emf, const NetworkParams& p);

enum class FaultKind { ThreePhaseToGround };

struct FaultSpec {
  FaultKind kind{FaultKind::ThreePhaseToGround};
  double t_start{0.8};
  double t_end{0.82};
  void validate() const;
};

/// Active iff t is in [t_start, t_end).
bool fault_state(double t, const FaultSpec& f);

}  // namespace frtsim
