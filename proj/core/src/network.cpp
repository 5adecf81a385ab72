#include "frtsim/network.hpp"

#include <algorithm>
#include <cmath>

#include "frtsim/errors.hpp"

namespace frtsim {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void NetworkParams::validate() const {
  if (!(nominal_voltage > 0.0)) throw ConfigError("network.nominal_voltage", "must be > 0");
  if (!(base_power > 0.0)) throw ConfigError("network.base_power", "must be > 0");
  if (!(grid_voltage > 0.0)) throw ConfigError("network.grid_voltage", "must be > 0");
  if (!(std::abs(grid_impedance) > 0.0) || !finite(grid_impedance))
    throw ConfigError("network.grid_impedance", "magnitude must be > 0");
  if (!(std::abs(line_impedance_per_km) > 0.0) || !finite(line_impedance_per_km))
    throw ConfigError("network.line_impedance_per_km", "magnitude must be > 0");
  if (!(line_length >= 0.0)) throw ConfigError("network.line_length", "must be >= 0");
  if (!(transformer.hv_voltage > 0.0)) throw ConfigError("network.transformer.hv_voltage", "must be > 0");
  if (!(transformer.lv_voltage > 0.0)) throw ConfigError("network.transformer.lv_voltage", "must be > 0");
  if (!(transformer.leakage > 0.0)) throw ConfigError("network.transformer.leakage", "must be > 0");
  if (!finite(load)) throw ConfigError("network.load", "must be finite");
  if (!(load_collapse_voltage > 0.0 && load_collapse_voltage < 1.0))
    throw ConfigError("network.load_collapse_voltage", "must lie in (0, 1)");
  if (!(fault_resistance > 0.0)) throw ConfigError("network.fault_resistance", "must be > 0");
  if (load_max_iterations < 1) throw ConfigError("network.load_max_iterations", "must be >= 1");
  if (!(load_tolerance > 0.0)) throw ConfigError("network.load_tolerance", "must be > 0");
  if (!(load_relaxation > 0.0 && load_relaxation <= 1.0))
    throw ConfigError("network.load_relaxation", "must lie in (0, 1]");
}

Complex grid_impedance_for_scr(double scr, double s_reference, double v_nominal, double x_over_r,
                               Complex line_impedance) {
  const double z_mag = v_nominal * v_nominal / (scr * s_reference);
  const double r = z_mag / std::sqrt(1.0 + x_over_r * x_over_r);
  return Complex{r, r * x_over_r} - line_impedance;
}

Admittance::Block Admittance::block() const {
  const Complex y = self();
  return {{{y.real(), -y.imag()}, {y.imag(), y.real()}}};
}

Admittance build_admittance(const NetworkParams& p, bool fault_active) {
  const Complex z = p.thevenin_impedance();
  if (!(std::abs(z) > 0.0) || !finite(z)) throw TopologyError("grid branch impedance is zero");
  Admittance y;
  y.source = 1.0 / z;
  if (fault_active) y.shunt = 1.0 / p.fault_resistance;
  if (!(std::abs(y.self()) > 0.0) || !finite(y.self())) throw TopologyError("singular PCC admittance");
  return y;
}

LoadCurrent constant_power_load_current(Complex s_load, const Vec2& v_pcc, double collapse_voltage) {
  const Complex v = to_complex(v_pcc);
  const double mag = std::abs(v);
  if (mag < collapse_voltage) {
    const Complex y = std::conj(s_load) / (collapse_voltage * collapse_voltage);
    return {from_complex(y * v), true};
  }
  return {from_complex(std::conj(s_load / v)), false};
}

PccSolution solve_pcc_voltage(const Admittance& y, std::span<const Vec2> injections,
                              const Vec2& emf, const NetworkParams& p) {
  Complex inj{};
  for (const Vec2& i : injections) inj += to_complex(i);
  const Complex e = to_complex(emf);
  const Complex y_self = y.self();
  const Complex norton = y.source * e + inj;
  const double collapse = p.load_collapse_voltage * p.nominal_voltage;
  const double tol = p.load_tolerance * p.nominal_voltage;

  PccSolution out;
  Complex v = norton / y_self;
  bool converged = std::abs(p.load) == 0.0;
  if (!converged) {
    for (int k = 0; k < p.load_max_iterations; ++k) {
      const LoadCurrent il = constant_power_load_current(p.load, from_complex(v), collapse);
      const Complex target = (norton - to_complex(il.current)) / y_self;
      const Complex next = v + p.load_relaxation * (target - v);
      out.iterations = k + 1;
      const double step = std::abs(next - v);
      v = next;
      if (step < tol) {
        converged = true;
        break;
      }
    }
  }
  Complex y_fallback{};
  if (!converged || !finite(v) || std::abs(v) == 0.0) {
    // Impedance linearisation at the last iterate (or nominal voltage if the iterate collapsed).
    const double vm = (finite(v) && std::abs(v) > 0.0) ? std::max(std::abs(v), collapse)
                                                       : p.nominal_voltage;
    y_fallback = std::conj(p.load) / (vm * vm);
    v = norton / (y_self + y_fallback);
    out.fallback = true;
  }

  const LoadCurrent il = constant_power_load_current(p.load, from_complex(v), collapse);
  Complex i_load = to_complex(il.current);
  if (out.fallback) i_load = y_fallback * v;
  out.v_pcc = from_complex(v);
  out.load_current = from_complex(i_load);
  out.load_impedance_mode = il.impedance_mode || out.fallback;
  out.grid_current = from_complex(y.source * (e - v));
  out.fault_current = from_complex(y.shunt * v);
  out.kcl_residual = std::abs(y.source * (e - v) + inj - i_load - y.shunt * v);
  return out;
}

void FaultSpec::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw ConfigError("fault.t_start", "must be finite");
  if (!(t_start < t_end)) throw ConfigError("fault.t_start", "must be < t_end");
}

bool fault_state(double t, const FaultSpec& f) { return t >= f.t_start && t < f.t_end; }

}  // namespace frtsim
