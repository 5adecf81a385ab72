#include "frtsim/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "frtsim/errors.hpp"

namespace frtsim {

const char* to_string(Initialization i) { return i == Initialization::Steady ? "steady" : "cold"; }

Initialization initialization_from_string(const std::string& name) {
  if (name == "steady") return Initialization::Steady;
  if (name == "cold") return Initialization::Cold;
  throw ConfigError("sim.initialization", "unknown mode '" + name + "' (expected steady or cold)");
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt", "must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("sim.t_end", "must be > 0");
  if (record_decimation < 1) throw ConfigError("sim.record_decimation", "must be >= 1");
  if (!(divergence_ceiling > 1.0)) throw ConfigError("sim.divergence_ceiling", "must be > 1");
  if (t_end / dt > 1e9) throw ConfigError("sim.dt", "too many steps for t_end");
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

void WindProfile::validate() const {
  if (segments.empty()) throw ConfigError("wind.segments", "at least one segment is required");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!std::isfinite(s.t_start)) throw ConfigError("wind.segments", "t_start must be finite");
    if (!(s.value >= 0.0) || !std::isfinite(s.value)) throw ConfigError("wind.segments", "values must be >= 0");
    if (i > 0 && !(s.t_start > segments[i - 1].t_start))
      throw ConfigError("wind.segments", "t_start must be strictly increasing");
  }
  if (segments.front().ramp) throw ConfigError("wind.segments", "the first segment cannot ramp");
}

double WindProfile::at(double t) const {
  if (t < segments.front().t_start) return segments.front().value;
  std::size_t i = 0;
  while (i + 1 < segments.size() && segments[i + 1].t_start <= t) ++i;
  if (i + 1 < segments.size() && segments[i + 1].ramp) {
    const auto& a = segments[i];
    const auto& b = segments[i + 1];
    return a.value + (b.value - a.value) * (t - a.t_start) / (b.t_start - a.t_start);
  }
  return segments[i].value;
}

void Scenario::validate() const {
  sim.validate();
  turbine.validate();
  machine.validate();
  if (!(machine_impedance_voltage > 0.0))
    throw ConfigError("scig.impedance_voltage", "must be > 0");
  if (!(gear_ratio >= 0.0)) throw ConfigError("turbine.gear_ratio", "must be >= 0 (0 derives it)");
  statcom.validate();
  if (!(references.v_dcref > statcom.v_dc_min()))
    throw ConfigError("control.v_dcref", "must exceed the DC blocking threshold");
  if (!(references.v_ref > 0.0)) throw ConfigError("control.v_ref", "must be > 0");
  if (!(current_bandwidth_hz > 0.0)) throw ConfigError("control.current_bandwidth_hz", "must be > 0");
  if (gains) {
    gains->dc.validate("control.gains.dc");
    gains->ac.validate("control.gains.ac");
    gains->current.validate("control.gains.current");
  }
  pll.validate();
  if (!(v_filter_hz > 0.0)) throw ConfigError("control.v_filter_hz", "must be > 0");
  network.validate();
  fault.validate();
  wind.validate();
  envelope.validate();
}

ModelSetup prepare_model(const Scenario& sc) {
  ModelSetup s;
  const double vm = sc.machine_impedance_voltage;
  const auto& tr = sc.network.transformer;
  s.leakage_inductance = tr.leakage * vm * vm / sc.machine.rated_va() / sc.machine.base_omega;
  s.machine = sc.machine.with_stator_series(0.0, s.leakage_inductance);
  s.inertia = sc.machine.effective_inertia();
  s.machine.inertia = s.inertia;
  s.ratio = tr.hv_voltage / vm;

  if (sc.gear_ratio > 0.0) {
    s.gear_ratio = sc.gear_ratio;
  } else {
    // Optimum tip-speed ratio at rated wind while delivering rated torque.
    const CpOptimum opt = optimal_tip_speed_ratio(sc.turbine.cp, sc.turbine.beta);
    const double omega_t = opt.lambda * sc.turbine.rated_wind / sc.turbine.blade_length;
    const double wm_sync = sc.machine.synchronous_mech_speed();
    const double slip = slip_for_torque(s.machine, vm, -sc.turbine.rated_power / wm_sync);
    s.gear_ratio = wm_sync * (1.0 - slip) / omega_t;
  }

  s.ac_plant_gain = sc.network.thevenin_impedance().imag() / sc.network.nominal_voltage;
  s.gains = sc.gains ? *sc.gains
                     : tune_default_gains(sc.statcom, sc.references, s.ac_plant_gain, sc.current_bandwidth_hz);
  s.gains.pll = sc.pll;
  s.gains.pll.v_nominal = sc.network.nominal_voltage;
  s.gains.pll.omega_nominal = sc.machine.base_omega;
  s.gains.v_filter_hz = sc.v_filter_hz;
  return s;
}

double EnergyAudit::mismatch() const {
  return source + mechanical - load - fault - grid_loss - machine_copper - filter_loss - dc_loss -
         stored_change;
}

double EnergyAudit::throughput() const { return std::abs(source) + std::abs(mechanical); }

double EnergyAudit::relative_mismatch() const {
  const double tp = throughput();
  return tp > 0.0 ? std::abs(mismatch()) / tp : 0.0;
}

CompositeModel::CompositeModel(const Scenario& sc, const ModelSetup& setup) : sc_(sc), setup_(setup) {}

namespace {

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.d - s * v.q, s * v.d + c * v.q};
}

}  // namespace

Snapshot CompositeModel::evaluate(double t, const StateVector& x, bool fault, StateVector* dx) const {
  const ScigParams& m = setup_.machine;
  const StatcomParams& st = sc_.statcom;
  const NetworkParams& net = sc_.network;
  const ControlGains& g = setup_.gains;
  const double a = setup_.ratio;

  Snapshot s;
  s.t = t;
  s.fault = fault;

  const Vec4 psi{x[idx::psi], x[idx::psi + 1], x[idx::psi + 2], x[idx::psi + 3]};
  const double wr = x[idx::omega_r];
  const Vec2 i_t = sc_.statcom_enabled ? Vec2{x[idx::i_t], x[idx::i_t + 1]} : Vec2{};
  const double v_dc = x[idx::v_dc];
  const double phi = x[idx::pll_phi];

  s.i_machine = currents_from_fluxes(psi, m);
  const Vec2 i_s{s.i_machine[0], s.i_machine[1]};
  const Vec2 i_r{s.i_machine[2], s.i_machine[3]};

  // Network: machine injects -i_s referred to the PCC, the converter injects i_t.
  const std::array<Vec2, 2> inj{Vec2{-i_s.d / a, -i_s.q / a}, i_t};
  s.emf = rotate({net.grid_voltage, 0.0}, -phi);
  const Admittance y = build_admittance(net, fault);
  const PccSolution sol = solve_pcc_voltage(y, inj, s.emf, net);
  s.v_pcc = sol.v_pcc;
  s.i_grid = sol.grid_current;
  s.i_load = sol.load_current;
  s.i_fault = sol.fault_current;
  s.load_impedance_mode = sol.load_impedance_mode;
  s.network_fallback = sol.fallback;
  const Vec2 v = s.v_pcc;
  const double vmag = v.norm();

  // PLL on the normalised q-axis error; the simulation frame is the PLL frame.
  const PllParams& pll = g.pll;
  s.pll_coasting = vmag < pll.lock_threshold * pll.v_nominal;
  const double err = s.pll_coasting ? 0.0 : v.q / vmag;
  const double w_raw = pll.omega_nominal + pll.k_p * err + x[idx::pll_int];
  s.omega = std::clamp(w_raw, pll.omega_min(), pll.omega_max());
  double d_pll_int = pll.k_i * err;
  if ((w_raw >= pll.omega_max() && err > 0.0) || (w_raw <= pll.omega_min() && err < 0.0)) d_pll_int = 0.0;

  // Machine and drive train.
  const Vec2 v_s = v / a;
  s.wind = sc_.wind.at(t);
  const double wm = 2.0 * wr / m.poles;
  s.drive = turbine_drive(sc_.turbine, setup_.gear_ratio, s.wind, wm);
  s.t_m = -s.drive.generator_torque;
  s.t_e = electromagnetic_torque(s.i_machine, m);
  const MachineState ms{psi, wr};
  const Vec4 dpsi = flux_derivative(ms, {v_s, s.t_m, s.omega}, m);
  const double dwr = rotor_acceleration(s.t_e, s.t_m, m);
  {
    const Vec4 di = currents_from_fluxes(dpsi, m);
    const double l = setup_.leakage_inductance;
    s.v_term = v_s - l * Vec2{di[0], di[1]} + s.omega * l * SkewJ::apply(i_s);
  }

  // STATCOM control stack.
  Vec2 di_t{};
  double dv_dc = 0.0, d_dc = 0.0, d_ac = 0.0, d_id = 0.0, d_iq = 0.0, d_vf = 0.0;
  double p_dc_loss = 0.0;
  if (sc_.statcom_enabled) {
    s.v_filtered = x[idx::v_filt];
    d_vf = 2.0 * std::numbers::pi * g.v_filter_hz * (vmag / net.nominal_voltage - s.v_filtered);
    s.i_limit = std::min(st.i_max, st.s_rated / std::max(vmag, 1e-3 * net.nominal_voltage));

    const double e_dc = sc_.references.v_dcref - v_dc;
    const double e_ac = sc_.references.v_ref - s.v_filtered;
    const double lim_dc = std::min({s.i_limit, std::abs(g.dc.out_min), std::abs(g.dc.out_max)});
    const double lim_ac = std::min({s.i_limit, std::abs(g.ac.out_min), std::abs(g.ac.out_max)});
    const PiOutput u_ac = pi_output(g.ac, x[idx::pi_ac], e_ac, {-lim_ac, lim_ac});
    s.u_ac = u_ac.value;
    const PiOutput u_dc = pi_output(g.dc, x[idx::pi_dc], e_dc, {-lim_dc, lim_dc});
    s.u_dc = u_dc.value;
    s.refs = limit_references(s.u_dc, s.u_ac, s.i_limit);
    const double d_room = std::sqrt(std::max(s.i_limit * s.i_limit - s.refs.i_qref * s.refs.i_qref, 0.0));
    const double d_lim = std::min(lim_dc, d_room);
    d_dc = pi_integral_rate(g.dc, x[idx::pi_dc], e_dc, {-d_lim, d_lim});
    d_ac = pi_integral_rate(g.ac, x[idx::pi_ac], e_ac, {-lim_ac, lim_ac});

    const Vec2 i_ref = converter_current_target(s.refs.i_dref, s.refs.i_qref);
    const Vec2 e_i = i_ref - i_t;
    s.current_pi_limit = std::min(std::abs(g.current.out_min), std::abs(g.current.out_max));
    const PiLimits lim_i{-s.current_pi_limit, s.current_pi_limit};
    s.u_current = {pi_output(g.current, x[idx::pi_id], e_i.d, lim_i).value,
                   pi_output(g.current, x[idx::pi_iq], e_i.q, lim_i).value};
    const Vec2 command = current_loop_feedforward(i_t, v, s.omega, st) + s.u_current;

    StatcomState ss{i_t, v_dc};
    if (v_dc <= st.v_dc_min()) {
      // Blocked: no controlled voltage, filter current decays through r_f.
      s.converter_blocked = true;
      s.v_conv = current_loop_feedforward(i_t, v, s.omega, st);
    } else {
      const ConverterOutput conv = converter_voltage(command, v_dc, st);
      s.v_conv = conv.v_t;
      s.converter_saturated = conv.saturated;
    }
    d_id = pi_integral_rate(g.current, x[idx::pi_id], e_i.d, lim_i);
    d_iq = pi_integral_rate(g.current, x[idx::pi_iq], e_i.q, lim_i);
    if (s.converter_saturated || s.converter_blocked) {
      // Do not integrate further in the direction of the clipped command.
      if (e_i.d * command.d > 0.0) d_id = 0.0;
      if (e_i.q * command.q > 0.0) d_iq = 0.0;
    }

    di_t = filter_current_derivative(ss, s.v_conv, v, st, s.omega);
    const double p_conv = converter_power(s.v_conv, i_t);
    p_dc_loss = dc_loss(v_dc, st);
    dv_dc = v_dc > 0.0 ? (-p_conv - p_dc_loss) / (st.c_dc * v_dc) : 0.0;
  }

  if (dx) {
    StateVector& d = *dx;
    d.assign(idx::size, 0.0);
    for (std::size_t k = 0; k < 4; ++k) d[idx::psi + k] = dpsi[k];
    d[idx::omega_r] = dwr;
    d[idx::i_t] = di_t.d;
    d[idx::i_t + 1] = di_t.q;
    d[idx::v_dc] = dv_dc;
    d[idx::pi_dc] = d_dc;
    d[idx::pi_ac] = d_ac;
    d[idx::pi_id] = d_id;
    d[idx::pi_iq] = d_iq;
    d[idx::pll_phi] = s.omega - pll.omega_nominal;
    d[idx::pll_int] = s.pll_coasting ? 0.0 : d_pll_int;
    d[idx::v_filt] = d_vf;

    d[idx::e_source] = dot(s.emf, s.i_grid);
    d[idx::e_mech] = -s.t_m * wm;
    d[idx::e_load] = dot(v, s.i_load);
    d[idx::e_fault] = dot(v, s.i_fault);
    d[idx::e_grid_loss] = net.thevenin_impedance().real() * dot(s.i_grid, s.i_grid);
    d[idx::e_copper] = m.r_s * dot(i_s, i_s) + m.r_r * dot(i_r, i_r);
    d[idx::e_filter] = st.r_f * dot(i_t, i_t);
    d[idx::e_dc_loss] = p_dc_loss;
  }
  return s;
}

StateVector CompositeModel::derivative(double t, const StateVector& x, bool fault) const {
  StateVector d;
  evaluate(t, x, fault, &d);
  return d;
}

double CompositeModel::stored_energy(const StateVector& x) const {
  const ScigParams& m = setup_.machine;
  const Vec4 psi{x[idx::psi], x[idx::psi + 1], x[idx::psi + 2], x[idx::psi + 3]};
  const Vec4 i = currents_from_fluxes(psi, m);
  const double wr = x[idx::omega_r];
  // Kinetic energy consistent with the swing law (p/J)(T_e - T_m).
  double w = magnetic_energy(i, m) + setup_.inertia * wr * wr / (m.poles * m.poles);
  if (sc_.statcom_enabled) {
    const Vec2 i_t{x[idx::i_t], x[idx::i_t + 1]};
    const double v_dc = x[idx::v_dc];
    w += 0.5 * sc_.statcom.l_f * dot(i_t, i_t) + 0.5 * sc_.statcom.c_dc * v_dc * v_dc;
  }
  return w;
}

StateVector CompositeModel::initial_state() const {
  const ScigParams& m = setup_.machine;
  const StatcomParams& st = sc_.statcom;
  const NetworkParams& net = sc_.network;
  const ControlGains& g = setup_.gains;
  const double w0 = g.pll.omega_nominal;
  const double a = setup_.ratio;

  StateVector x(idx::size, 0.0);
  x[idx::v_dc] = sc_.references.v_dcref;
  x[idx::v_filt] = 1.0;
  if (sc_.sim.initialization == Initialization::Cold) {
    x[idx::omega_r] = w0;
    return x;
  }

  // Fixed point between the network solve and the machine/converter steady
  // states, in the frame of the grid EMF; rotated onto the PCC voltage at the end.
  const Admittance y = build_admittance(net, false);
  const Vec2 emf{net.grid_voltage, 0.0};
  const double wind0 = sc_.wind.at(0.0);
  auto balance = [&](const Vec2& v_s, double slip, MachineSteadyState* out) {
    const double wr = w0 * (1.0 - slip);
    const MachineSteadyState ss = steady_state(m, v_s, w0, wr);
    if (out) *out = ss;
    return ss.torque + turbine_drive(sc_.turbine, setup_.gear_ratio, wind0, 2.0 * wr / m.poles).generator_torque;
  };

  MachineSteadyState mach{};
  double slip = 0.0, i_dref = 0.0, i_qref = 0.0;
  Vec2 v_prev{net.nominal_voltage, 0.0};
  Vec2 v{};
  for (int it = 0; it < 200; ++it) {
    const Vec2 i_s{mach.current[0], mach.current[1]};
    // References live in the PCC-voltage frame; the solve runs in the EMF frame.
    const double d_prev = std::atan2(v_prev.q, v_prev.d);
    const Vec2 i_t = sc_.statcom_enabled ? rotate(converter_current_target(i_dref, i_qref), d_prev) : Vec2{};
    const std::array<Vec2, 2> inj{Vec2{-i_s.d / a, -i_s.q / a}, i_t};
    v = solve_pcc_voltage(y, inj, emf, net).v_pcc;
    const Vec2 v_s = v / a;

    const double s_po = pull_out_slip(m, v_s.norm(), -1.0);
    if (balance(v_s, s_po, nullptr) >= 0.0)
      throw InvalidInput("initial wind torque exceeds the machine pull-out torque");
    double lo = s_po, hi = 0.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
      const double mid = 0.5 * (lo + hi);
      (balance(v_s, mid, nullptr) < 0.0 ? lo : hi) = mid;
    }
    slip = 0.5 * (lo + hi);
    balance(v_s, slip, &mach);

    if (sc_.statcom_enabled) {
      const double vmag = v.norm();
      i_qref += 0.5 * (sc_.references.v_ref - vmag / net.nominal_voltage) / setup_.ac_plant_gain;
      i_dref = (dc_loss(sc_.references.v_dcref, st) + st.r_f * (i_dref * i_dref + i_qref * i_qref)) / vmag;
    }
    if ((v - v_prev).norm() < 1e-10 * net.nominal_voltage && it > 2) break;
    v_prev = v;
  }

  const double delta = std::atan2(v.q, v.d);
  for (std::size_t k = 0; k < 2; ++k) {
    const Vec2 r = rotate({mach.psi[2 * k], mach.psi[2 * k + 1]}, -delta);
    x[idx::psi + 2 * k] = r.d;
    x[idx::psi + 2 * k + 1] = r.q;
  }
  x[idx::omega_r] = w0 * (1.0 - slip);
  x[idx::pll_phi] = delta;
  if (sc_.statcom_enabled) {
    const Vec2 i_t = converter_current_target(i_dref, i_qref);
    x[idx::i_t] = i_t.d;
    x[idx::i_t + 1] = i_t.q;
    x[idx::v_filt] = v.norm() / net.nominal_voltage;
    if (g.dc.k_i > 0.0) x[idx::pi_dc] = i_dref / g.dc.k_i;
    if (g.ac.k_i > 0.0) x[idx::pi_ac] = (i_qref - g.ac.k_p * (sc_.references.v_ref - x[idx::v_filt])) / g.ac.k_i;
    if (g.current.k_i > 0.0) {
      x[idx::pi_id] = st.r_f * i_t.d / g.current.k_i;
      x[idx::pi_iq] = st.r_f * i_t.q / g.current.k_i;
    }
  }
  return x;
}

namespace {

constexpr std::size_t kMaxListedViolations = 20;
constexpr std::size_t kMaxEvents = 500;

std::vector<double> record_row(const Snapshot& s, const StateVector& x, const Scenario& sc, double w0) {
  const double vn = sc.network.nominal_voltage;
  const double vm = sc.machine_impedance_voltage;
  const Vec2 v = s.v_pcc;
  const Vec2 i_s{s.i_machine[0], s.i_machine[1]};
  const Vec2 i_t = sc.statcom_enabled ? Vec2{x[idx::i_t], x[idx::i_t + 1]} : Vec2{};
  auto q_of = [](const Vec2& vv, const Vec2& ii) { return vv.q * ii.d - vv.d * ii.q; };
  std::vector<double> row{
      s.t,
      v.norm() / vn,
      v.d,
      v.q,
      s.i_grid.norm(),
      dot(v, s.i_grid),
      q_of(v, s.i_grid),
      s.v_term.norm() / vm,
      i_s.norm() * vm / sc.network.transformer.lv_voltage,
      -dot(s.v_term, i_s),
      -q_of(s.v_term, i_s),
      i_t.d,
      i_t.q,
      q_of(v, i_t),
      x[idx::v_dc],
      x[idx::omega_r],
      s.t_e,
      s.t_m,
      s.wind,
      s.fault ? 1.0 : 0.0,
      s.converter_saturated ? 1.0 : 0.0,
      (s.refs.d_curtailed || std::abs(s.u_ac) >= s.i_limit) && sc.statcom_enabled ? 1.0 : 0.0,
      s.pll_coasting ? 1.0 : 0.0,
      s.load_impedance_mode ? 1.0 : 0.0,
  };
  if (sc.sim.verbose) {
    const double theta = wrap_angle(w0 * s.t + x[idx::pll_phi]);
    const double extra[] = {s.refs.i_dref, s.refs.i_qref, s.v_filtered, s.omega, theta, s.v_conv.d, s.v_conv.q};
    row.insert(row.end(), std::begin(extra), std::end(extra));
  }
  return row;
}

/// Largest per-unit magnitude among the monitored electrical quantities.
double worst_per_unit(const Snapshot& s, const StateVector& x, const Scenario& sc, const ModelSetup& setup) {
  const double vn = sc.network.nominal_voltage;
  const double vm = sc.machine_impedance_voltage;
  const double i_rated_m = sc.machine.rated_va() / vm;
  const Vec2 i_s{s.i_machine[0], s.i_machine[1]};
  double worst = std::max({s.v_pcc.norm() / vn, s.i_grid.norm() / sc.network.base_current(),
                           s.v_term.norm() / vm, i_s.norm() / i_rated_m,
                           std::abs(x[idx::omega_r]) / setup.gains.pll.omega_nominal});
  if (sc.statcom_enabled) {
    const Vec2 i_t{x[idx::i_t], x[idx::i_t + 1]};
    worst = std::max({worst, std::abs(x[idx::v_dc]) / sc.references.v_dcref, i_t.norm() / sc.statcom.i_max});
  }
  for (double v : x)
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  return worst;
}

class LimitMonitor {
public:
  explicit LimitMonitor(ScenarioResult& r) : r_(r) {}

  void check(double t, const char* what, double value, double limit) {
    ++r_.limit_checks;
    if (std::abs(value) <= limit * (1.0 + 1e-12) + 1e-12) return;
    ++r_.limit_violation_count;
    if (r_.limit_violations.size() < kMaxListedViolations) r_.limit_violations.push_back({t, what, value, limit});
  }

private:
  ScenarioResult& r_;
};

void check_limits(LimitMonitor& mon, const Snapshot& s, const StateVector& x, const Scenario& sc,
                  const ModelSetup& setup) {
  const ControlGains& g = setup.gains;
  const double lim_dc = std::min({s.i_limit, std::abs(g.dc.out_min), std::abs(g.dc.out_max)});
  const double lim_ac = std::min({s.i_limit, std::abs(g.ac.out_min), std::abs(g.ac.out_max)});
  mon.check(s.t, "dc_loop_output", s.u_dc, lim_dc);
  mon.check(s.t, "ac_loop_output", s.u_ac, lim_ac);
  mon.check(s.t, "current_loop_output_d", s.u_current.d, s.current_pi_limit);
  mon.check(s.t, "current_loop_output_q", s.u_current.q, s.current_pi_limit);
  mon.check(s.t, "reference_magnitude_sq", s.refs.i_dref * s.refs.i_dref + s.refs.i_qref * s.refs.i_qref,
            sc.statcom.i_max * sc.statcom.i_max);
  if (!s.converter_blocked)
    mon.check(s.t, "converter_voltage", s.v_conv.norm(), sc.statcom.modulation_limit * x[idx::v_dc]);
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc) {
  sc.validate();
  ScenarioResult r;
  r.name = sc.name;
  r.statcom_enabled = sc.statcom_enabled;
  r.expect_unstable = sc.expect_unstable;
  r.setup = prepare_model(sc);
  r.series = TimeSeries::for_run(sc.sim.verbose);
  const CompositeModel model(sc, r.setup);
  const double dt = sc.sim.dt;
  const double w0 = r.setup.gains.pll.omega_nominal;
  const std::size_t n = sc.sim.steps();
  const auto dec = static_cast<std::size_t>(sc.sim.record_decimation);
  const auto k_on = static_cast<std::size_t>(std::llround(sc.fault.t_start / dt));
  const auto k_off = static_cast<std::size_t>(std::llround(sc.fault.t_end / dt));
  r.realized_fault_start = static_cast<double>(k_on) * dt;
  r.realized_fault_end = static_cast<double>(k_off) * dt;

  auto add_event = [&](double t, std::string kind, std::string detail) {
    if (r.events.size() < kMaxEvents) r.events.push_back({t, std::move(kind), std::move(detail)});
  };

  StateVector x;
  try {
    x = model.initial_state();
  } catch (const InvalidInput& e) {
    r.diverged = true;
    add_event(0.0, "initialization_failed", e.what());
    return r;
  }
  const double w_initial = model.stored_energy(x);
  LimitMonitor monitor(r);
  Snapshot prev{};
  bool have_prev = false;

  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const bool fault = sc.fault_enabled && k >= k_on && k < k_off;
    Snapshot s;
    try {
      s = model.evaluate(t, x, fault);
    } catch (const std::exception& e) {
      r.diverged = true;
      r.divergence_time = t;
      add_event(t, "divergence", e.what());
      break;
    }
    const double worst = worst_per_unit(s, x, sc, r.setup);
    if (!(worst <= sc.sim.divergence_ceiling)) {
      r.diverged = true;
      r.divergence_time = t;
      add_event(t, "divergence", "state exceeded the divergence ceiling (" + std::to_string(worst) + " p.u.)");
      break;
    }

    if (sc.fault_enabled && k == k_on) add_event(t, "fault_start", "three-phase fault applied at the PCC");
    if (sc.fault_enabled && k == k_off) add_event(t, "fault_clear", "fault cleared");
    if (have_prev) {
      if (s.pll_coasting != prev.pll_coasting)
        add_event(t, s.pll_coasting ? "pll_coast_start" : "pll_coast_end", "");
      if (s.load_impedance_mode != prev.load_impedance_mode)
        add_event(t, s.load_impedance_mode ? "load_impedance_mode" : "load_constant_power", "");
      if (s.network_fallback && !prev.network_fallback)
        add_event(t, "network_fallback", "constant-power load iteration did not converge");
      if (s.converter_blocked && !prev.converter_blocked) add_event(t, "converter_blocked", "DC link below threshold");
    }
    if (sc.statcom_enabled) check_limits(monitor, s, x, sc, r.setup);
    if (k % dec == 0) r.series.append(record_row(s, x, sc, w0));
    prev = s;
    have_prev = true;
    if (k == n) break;

    try {
      x = integrate_step(
          sc.sim.solver, [&](double tt, const StateVector& xx) { return model.derivative(tt, xx, fault); }, x,
          t, dt);
    } catch (const DivergenceError& e) {
      r.diverged = true;
      r.divergence_time = e.time();
      add_event(e.time(), "divergence", e.what());
      break;
    } catch (const std::exception& e) {
      r.diverged = true;
      r.divergence_time = t;
      add_event(t, "divergence", e.what());
      break;
    }
    r.steps = k + 1;
  }

  EnergyAudit& en = r.energy;
  en.source = x[idx::e_source];
  en.mechanical = x[idx::e_mech];
  en.load = x[idx::e_load];
  en.fault = x[idx::e_fault];
  en.grid_loss = x[idx::e_grid_loss];
  en.machine_copper = x[idx::e_copper];
  en.filter_loss = x[idx::e_filter];
  en.dc_loss = x[idx::e_dc_loss];
  en.stored_change = model.stored_energy(x) - w_initial;
  return r;
}

}  // namespace frtsim
