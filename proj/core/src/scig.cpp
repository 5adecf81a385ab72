#include "frtsim/scig.hpp"

#include <cmath>

#include "frtsim/errors.hpp"

namespace frtsim {

using cd = std::complex<double>;

double ScigParams::effective_inertia() const {
  if (inertia > 0.0) return inertia;
  const double wm = synchronous_mech_speed();
  return 2.0 * inertia_constant * rated_va() / (wm * wm);
}

void ScigParams::validate() const {
  if (!(r_s > 0.0)) throw ConfigError("scig.r_s", "must be > 0");
  if (!(r_r > 0.0)) throw ConfigError("scig.r_r", "must be > 0");
  if (!(l_s > 0.0)) throw ConfigError("scig.l_s", "must be > 0");
  if (!(l_r > 0.0)) throw ConfigError("scig.l_r", "must be > 0");
  if (!(l_m > 0.0)) throw ConfigError("scig.l_m", "must be > 0");
  if (!(determinant() > 0.0)) throw ConfigError("scig.l_m", "inductance matrix is singular (l_s l_r <= l_m^2)");
  if (poles < 2 || poles % 2 != 0) throw ConfigError("scig.poles", "must be even and >= 2");
  if (!(inertia_constant > 0.0) && !(inertia > 0.0))
    throw ConfigError("scig.inertia_constant", "must be > 0");
  if (inertia < 0.0) throw ConfigError("scig.inertia", "must be >= 0");
  if (!(rated_voltage > 0.0)) throw ConfigError("scig.rated_voltage", "must be > 0");
  if (!(rated_power > 0.0)) throw ConfigError("scig.rated_power", "must be > 0");
  if (!(power_factor > 0.0 && power_factor <= 1.0)) throw ConfigError("scig.power_factor", "must lie in (0, 1]");
  if (!(base_omega > 0.0)) throw ConfigError("scig.base_omega", "must be > 0");
}

ScigParams ScigParams::referred(double from_voltage, double to_voltage) const {
  const double k = (to_voltage / from_voltage) * (to_voltage / from_voltage);
  ScigParams out = *this;
  out.r_s *= k;
  out.r_r *= k;
  out.l_s *= k;
  out.l_r *= k;
  out.l_m *= k;
  return out;
}

ScigParams ScigParams::with_stator_series(double resistance, double inductance) const {
  ScigParams out = *this;
  out.r_s += resistance;
  out.l_s += inductance;
  return out;
}

Vec4 currents_from_fluxes(const Vec4& psi, const ScigParams& p) {
  const double inv = 1.0 / p.determinant();
  return {
      inv * (p.l_r * psi[0] - p.l_m * psi[2]),
      inv * (p.l_r * psi[1] - p.l_m * psi[3]),
      inv * (p.l_s * psi[2] - p.l_m * psi[0]),
      inv * (p.l_s * psi[3] - p.l_m * psi[1]),
  };
}

Vec4 fluxes_from_currents(const Vec4& i, const ScigParams& p) {
  return {
      p.l_s * i[0] + p.l_m * i[2],
      p.l_s * i[1] + p.l_m * i[3],
      p.l_m * i[0] + p.l_r * i[2],
      p.l_m * i[1] + p.l_r * i[3],
  };
}

Vec4 flux_derivative(const MachineState& s, const MachineInput& u, const ScigParams& p) {
  const Vec4 i = currents_from_fluxes(s.psi, p);
  const double w = u.omega;
  const double slip_w = u.omega - s.omega_r;
  // Rotor rows rotate the rotor flux at the slip frequency.
  return {
      w * s.psi[1] - p.r_s * i[0] + u.v_s.d,
      -w * s.psi[0] - p.r_s * i[1] + u.v_s.q,
      slip_w * s.psi[3] - p.r_r * i[2],
      -slip_w * s.psi[2] - p.r_r * i[3],
  };
}

double electromagnetic_torque(const Vec4& i, const ScigParams& p) {
  const Vec2 is{i[0], i[1]};
  const Vec2 ir{i[2], i[3]};
  return -0.5 * p.poles * p.l_m * SkewJ::bilinear(is, ir);
}

double rotor_acceleration(double t_e, double t_m, const ScigParams& p) {
  return p.poles / p.effective_inertia() * (t_e - t_m);
}

double steady_state_torque_slip(const ScigParams& p, double v_mag, double slip) {
  if (slip == 0.0) return 0.0;
  const double w = p.base_omega;
  const cd j{0.0, 1.0};
  const cd z_m = j * w * p.l_m;
  const cd z_s = p.r_s + j * w * (p.l_s - p.l_m);
  const cd z_lr = j * w * (p.l_r - p.l_m);
  const cd v_th = v_mag * z_m / (z_s + z_m);
  const cd z_th = z_m * z_s / (z_s + z_m);
  const cd i_r = v_th / (z_th + p.r_r / slip + z_lr);
  const double p_airgap = std::norm(i_r) * p.r_r / slip;
  return p_airgap / (2.0 * w / p.poles);
}

MachineSteadyState steady_state(const ScigParams& p, const Vec2& v_s, double omega, double omega_r) {
  const cd j{0.0, 1.0};
  const double ws = omega - omega_r;
  // [r_s + j w l_s, j w l_m; j ws l_m, r_r + j ws l_r] [is; ir] = [v; 0]
  const cd a11 = p.r_s + j * omega * p.l_s;
  const cd a12 = j * omega * p.l_m;
  const cd a21 = j * ws * p.l_m;
  const cd a22 = p.r_r + j * ws * p.l_r;
  const cd det = a11 * a22 - a12 * a21;
  const cd v = to_complex(v_s);
  const cd is = v * a22 / det;
  const cd ir = -v * a21 / det;
  MachineSteadyState out;
  out.current = {is.real(), is.imag(), ir.real(), ir.imag()};
  out.psi = fluxes_from_currents(out.current, p);
  out.torque = electromagnetic_torque(out.current, p);
  return out;
}

double pull_out_slip(const ScigParams& p, double v_mag, double sign) {
  const double dir = sign < 0.0 ? -1.0 : 1.0;
  double best_s = 0.0, best_t = 0.0;
  // log-spaced scan from 1e-6 to 1
  constexpr int kSteps = 6000;
  for (int k = 0; k <= kSteps; ++k) {
    const double s = dir * std::pow(10.0, -6.0 + 6.0 * k / kSteps);
    const double t = std::abs(steady_state_torque_slip(p, v_mag, s));
    if (t > best_t) {
      best_t = t;
      best_s = s;
    }
  }
  return best_s;
}

double slip_for_torque(const ScigParams& p, double v_mag, double torque) {
  if (torque == 0.0) return 0.0;
  const double s_max = pull_out_slip(p, v_mag, torque);
  if (std::abs(torque) > std::abs(steady_state_torque_slip(p, v_mag, s_max)))
    throw InvalidInput("requested torque exceeds pull-out torque");
  double lo = 0.0, hi = s_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(steady_state_torque_slip(p, v_mag, mid)) < std::abs(torque))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double magnetic_energy(const Vec4& i, const ScigParams& p) {
  const Vec4 psi = fluxes_from_currents(i, p);
  return 0.5 * (i[0] * psi[0] + i[1] * psi[1] + i[2] * psi[2] + i[3] * psi[3]);
}

}  // namespace frtsim
