#include "frtsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frtsim/errors.hpp"

namespace frtsim {

namespace {

using json = nlohmann::ordered_json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

/// Object view that records which keys were consumed so leftovers can be rejected.
class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  const json* find(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  void num(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void str(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
      out = v->get<std::string>();
    }
  }

  /// [real, imag]
  void complex(const std::string& key, Complex& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
        throw ConfigError(join(path_, key), "expected [real, imag]");
      out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
  }

  template <class F>
  void child(const std::string& key, F&& f) {
    if (const json* v = find(key)) {
      Reader r(*v, join(path_, key));
      f(r);
      r.finish();
    }
  }

  const std::string& path() const { return path_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json pi_json(const PiGains& g) {
  return {{"k_p", g.k_p}, {"k_i", g.k_i}, {"out_min", g.out_min}, {"out_max", g.out_max}};
}

void read_pi(Reader& r, PiGains& g) {
  r.num("k_p", g.k_p);
  r.num("k_i", g.k_i);
  r.num("out_min", g.out_min);
  r.num("out_max", g.out_max);
}

json to_json(const ScenarioConfig& cfg) {
  const Scenario& s = cfg.scenario;
  json j;
  j["name"] = s.name;
  j["sim"] = {{"dt", s.sim.dt},
              {"t_end", s.sim.t_end},
              {"record_decimation", s.sim.record_decimation},
              {"solver", to_string(s.sim.solver)},
              {"divergence_ceiling", s.sim.divergence_ceiling},
              {"initialization", to_string(s.sim.initialization)},
              {"verbose", s.sim.verbose}};
  const TurbineParams& t = s.turbine;
  j["turbine"] = {{"rated_power", t.rated_power},
                  {"rated_wind", t.rated_wind},
                  {"rho", t.rho},
                  {"blade_length", t.blade_length},
                  {"beta", t.beta},
                  {"v_min", t.v_min},
                  {"omega_floor", t.omega_floor},
                  {"gear_ratio", s.gear_ratio},
                  {"cp", {{"c1", t.cp.c1}, {"c2", t.cp.c2}, {"c3", t.cp.c3}, {"c4", t.cp.c4}, {"c5", t.cp.c5},
                          {"c6", t.cp.c6}}}};
  const ScigParams& m = s.machine;
  j["scig"] = {{"rated_power", m.rated_power},
               {"rated_voltage", m.rated_voltage},
               {"frequency", m.base_omega / (2.0 * std::numbers::pi)},
               {"inertia_constant", m.inertia_constant},
               {"inertia", m.inertia},
               {"r_s", m.r_s},
               {"r_r", m.r_r},
               {"l_s", m.l_s},
               {"l_r", m.l_r},
               {"l_m", m.l_m},
               {"power_factor", m.power_factor},
               {"poles", m.poles},
               {"impedance_voltage", s.machine_impedance_voltage}};
  const StatcomParams& c = s.statcom;
  j["statcom"] = {{"enabled", s.statcom_enabled},
                  {"s_rated", c.s_rated},
                  {"v_ac_rated", c.v_ac_rated},
                  {"i_max", c.i_max},
                  {"l_f", c.l_f},
                  {"r_f", c.r_f},
                  {"c_dc", c.c_dc},
                  {"v_dc_rated", c.v_dc_rated},
                  {"r_loss", c.r_loss},
                  {"modulation_limit", c.modulation_limit},
                  {"v_dc_min_fraction", c.v_dc_min_fraction}};
  json control = {{"v_dcref", s.references.v_dcref},
                  {"v_ref", s.references.v_ref},
                  {"current_bandwidth_hz", s.current_bandwidth_hz},
                  {"v_filter_hz", s.v_filter_hz},
                  {"pll", {{"k_p", s.pll.k_p}, {"k_i", s.pll.k_i}, {"lock_threshold", s.pll.lock_threshold}}}};
  if (s.gains)
    control["gains"] = {{"dc", pi_json(s.gains->dc)}, {"ac", pi_json(s.gains->ac)}, {"current", pi_json(s.gains->current)}};
  j["control"] = control;
  const NetworkParams& n = s.network;
  j["network"] = {{"nominal_voltage", n.nominal_voltage},
                  {"base_power", n.base_power},
                  {"grid_voltage", n.grid_voltage},
                  {"grid_impedance", complex_json(n.grid_impedance)},
                  {"line_impedance_per_km", complex_json(n.line_impedance_per_km)},
                  {"line_length", n.line_length},
                  {"transformer",
                   {{"hv_voltage", n.transformer.hv_voltage},
                    {"lv_voltage", n.transformer.lv_voltage},
                    {"leakage", n.transformer.leakage}}},
                  {"load", complex_json(n.load)},
                  {"load_collapse_voltage", n.load_collapse_voltage},
                  {"fault_resistance", n.fault_resistance},
                  {"load_max_iterations", n.load_max_iterations},
                  {"load_tolerance", n.load_tolerance},
                  {"load_relaxation", n.load_relaxation}};
  j["fault"] = {{"enabled", s.fault_enabled},
                {"kind", "three_phase_to_ground"},
                {"t_start", s.fault.t_start},
                {"t_end", s.fault.t_end}};
  json segs = json::array();
  for (const auto& w : s.wind.segments) segs.push_back({{"t_start", w.t_start}, {"value", w.value}, {"ramp", w.ramp}});
  j["wind"] = {{"segments", segs}};
  const FrtEnvelope& e = s.envelope;
  j["envelope"] = {{"t0", e.t0},
                   {"t1", e.t1},
                   {"window_end", e.window_end},
                   {"sag_floor", e.sag_floor},
                   {"recovery_level", e.recovery_level}};
  j["expect_unstable"] = s.expect_unstable;
  j["output"] = {{"dir", cfg.output.dir}};
  return j;
}

void from_json_tree(const json& root, ScenarioConfig& cfg) {
  Scenario& s = cfg.scenario;
  json gains_node;
  Reader r(root, "");
  r.str("name", s.name);
  r.child("sim", [&](Reader& c) {
    c.num("dt", s.sim.dt);
    c.num("t_end", s.sim.t_end);
    c.integer("record_decimation", s.sim.record_decimation);
    std::string solver = to_string(s.sim.solver);
    c.str("solver", solver);
    s.sim.solver = solver_from_string(solver);
    std::string init = to_string(s.sim.initialization);
    c.str("initialization", init);
    s.sim.initialization = initialization_from_string(init);
    c.num("divergence_ceiling", s.sim.divergence_ceiling);
    c.boolean("verbose", s.sim.verbose);
  });
  r.child("turbine", [&](Reader& c) {
    TurbineParams& t = s.turbine;
    c.num("rated_power", t.rated_power);
    c.num("rated_wind", t.rated_wind);
    c.num("rho", t.rho);
    c.num("blade_length", t.blade_length);
    t.swept_area = std::numbers::pi * t.blade_length * t.blade_length;
    c.num("beta", t.beta);
    c.num("v_min", t.v_min);
    c.num("omega_floor", t.omega_floor);
    c.num("gear_ratio", s.gear_ratio);
    c.child("cp", [&](Reader& k) {
      k.num("c1", t.cp.c1);
      k.num("c2", t.cp.c2);
      k.num("c3", t.cp.c3);
      k.num("c4", t.cp.c4);
      k.num("c5", t.cp.c5);
      k.num("c6", t.cp.c6);
    });
  });
  r.child("scig", [&](Reader& c) {
    ScigParams& m = s.machine;
    c.num("rated_power", m.rated_power);
    c.num("rated_voltage", m.rated_voltage);
    double f = m.base_omega / (2.0 * std::numbers::pi);
    c.num("frequency", f);
    if (!(f > 0.0)) throw ConfigError("scig.frequency", "must be > 0");
    m.base_omega = 2.0 * std::numbers::pi * f;
    c.num("inertia_constant", m.inertia_constant);
    c.num("inertia", m.inertia);
    c.num("r_s", m.r_s);
    c.num("r_r", m.r_r);
    c.num("l_s", m.l_s);
    c.num("l_r", m.l_r);
    c.num("l_m", m.l_m);
    c.num("power_factor", m.power_factor);
    c.integer("poles", m.poles);
    c.num("impedance_voltage", s.machine_impedance_voltage);
  });
  r.child("statcom", [&](Reader& c) {
    StatcomParams& p = s.statcom;
    c.boolean("enabled", s.statcom_enabled);
    c.num("s_rated", p.s_rated);
    c.num("v_ac_rated", p.v_ac_rated);
    c.num("i_max", p.i_max);
    c.num("l_f", p.l_f);
    c.num("r_f", p.r_f);
    c.num("c_dc", p.c_dc);
    c.num("v_dc_rated", p.v_dc_rated);
    c.num("r_loss", p.r_loss);
    c.num("modulation_limit", p.modulation_limit);
    c.num("v_dc_min_fraction", p.v_dc_min_fraction);
  });
  r.child("control", [&](Reader& c) {
    c.num("v_dcref", s.references.v_dcref);
    c.num("v_ref", s.references.v_ref);
    c.num("current_bandwidth_hz", s.current_bandwidth_hz);
    c.num("v_filter_hz", s.v_filter_hz);
    c.child("pll", [&](Reader& k) {
      k.num("k_p", s.pll.k_p);
      k.num("k_i", s.pll.k_i);
      k.num("lock_threshold", s.pll.lock_threshold);
    });
    if (const json* g = c.find("gains")) gains_node = *g;
  });
  r.child("network", [&](Reader& c) {
    NetworkParams& n = s.network;
    c.num("nominal_voltage", n.nominal_voltage);
    c.num("base_power", n.base_power);
    c.num("grid_voltage", n.grid_voltage);
    c.complex("grid_impedance", n.grid_impedance);
    c.complex("line_impedance_per_km", n.line_impedance_per_km);
    c.num("line_length", n.line_length);
    c.child("transformer", [&](Reader& k) {
      k.num("hv_voltage", n.transformer.hv_voltage);
      k.num("lv_voltage", n.transformer.lv_voltage);
      k.num("leakage", n.transformer.leakage);
    });
    c.complex("load", n.load);
    c.num("load_collapse_voltage", n.load_collapse_voltage);
    c.num("fault_resistance", n.fault_resistance);
    c.integer("load_max_iterations", n.load_max_iterations);
    c.num("load_tolerance", n.load_tolerance);
    c.num("load_relaxation", n.load_relaxation);
  });
  r.child("fault", [&](Reader& c) {
    c.boolean("enabled", s.fault_enabled);
    std::string kind = "three_phase_to_ground";
    c.str("kind", kind);
    if (kind != "three_phase_to_ground")
      throw ConfigError("fault.kind", "only three_phase_to_ground is supported");
    c.num("t_start", s.fault.t_start);
    c.num("t_end", s.fault.t_end);
  });
  r.child("wind", [&](Reader& c) {
    if (const json* segs = c.find("segments")) {
      if (!segs->is_array()) throw ConfigError("wind.segments", "expected an array");
      s.wind.segments.clear();
      for (std::size_t i = 0; i < segs->size(); ++i) {
        Reader k((*segs)[i], "wind.segments[" + std::to_string(i) + "]");
        WindSegment w;
        k.num("t_start", w.t_start);
        k.num("value", w.value);
        k.boolean("ramp", w.ramp);
        k.finish();
        s.wind.segments.push_back(w);
      }
    }
  });
  r.child("envelope", [&](Reader& c) {
    c.num("t0", s.envelope.t0);
    c.num("t1", s.envelope.t1);
    c.num("window_end", s.envelope.window_end);
    c.num("sag_floor", s.envelope.sag_floor);
    c.num("recovery_level", s.envelope.recovery_level);
  });
  r.boolean("expect_unstable", s.expect_unstable);
  r.child("output", [&](Reader& c) { c.str("dir", cfg.output.dir); });
  r.finish();

  if (!gains_node.is_null()) {
    // Explicit gains start from the loop-shaped values so partial overrides work.
    s.gains.reset();
    s.validate();
    ControlGains g = prepare_model(s).gains;
    Reader k(gains_node, "control.gains");
    k.child("dc", [&](Reader& p) { read_pi(p, g.dc); });
    k.child("ac", [&](Reader& p) { read_pi(p, g.ac); });
    k.child("current", [&](Reader& p) { read_pi(p, g.current); });
    k.finish();
    s.gains = g;
  }
}

}  // namespace

ScenarioConfig default_config() { return ScenarioConfig{}; }

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg = default_config();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.what());
  }
  from_json_tree(root, cfg);
  cfg.scenario.validate();
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("", "cannot read configuration file '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json root = to_json(cfg);
  json* node = &root;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    json& next = (*node)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError(key, "'" + part + "' is not a section");
    node = &next;
    pos = dot + 1;
  }
  return parse_config_text(root.dump());
}

const char* version() { return FRTSIM_VERSION; }

ScenarioConfig preset_config(const std::string& name) {
  if (name == "paper") return default_config();
  throw ConfigError("preset", "unknown preset '" + name + "' (available: paper)");
}

}  // namespace frtsim
