#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frtsim/control.hpp"
#include "frtsim/grid_code.hpp"
#include "frtsim/integrator.hpp"
#include "frtsim/network.hpp"
#include "frtsim/scig.hpp"
#include "frtsim/statcom.hpp"
#include "frtsim/timeseries.hpp"
#include "frtsim/turbine.hpp"

namespace frtsim {

enum class Initialization { Steady, Cold };

const char* to_string(Initialization i);
Initialization initialization_from_string(const std::string& name);

struct SimConfig {
  double dt{1e-4};               // s
  double t_end{2.0};             // s
  int record_decimation{10};
  Solver solver{Solver::Rk4};
  double divergence_ceiling{10.0};  // p.u.
  Initialization initialization{Initialization::Steady};
  bool verbose{false};

  void validate() const;
  std::size_t steps() const;
};

struct WindSegment {
  double t_start{0.0};  // s
  double value{0.0};    // m/s
  bool ramp{false};     // ramp linearly from the previous segment's value
};

/// Piecewise profile. A segment with ramp=false holds its value from t_start;
/// one with ramp=true is reached linearly from the previous segment.
struct WindProfile {
  std::vector<WindSegment> segments{{0.0, 3.0, false}, {0.5, 3.0, false}, {1.0, 12.0, true}};

  void validate() const;
  double at(double t) const;
};

/// Complete parameter set of one scenario run.
struct Scenario {
  std::string name{"paper"};
  SimConfig sim;
  TurbineParams turbine;
  ScigParams machine;
  /// Voltage level the machine impedances are referred to; the machine
  /// model runs at this level behind the step-up transformer.
  double machine_impedance_voltage{5000.0};
  double gear_ratio{0.0};             // 0 derives it from the optimum tip-speed ratio at rated wind
  StatcomParams statcom;
  ControlReferences references;
  /// PI gains of the dc, ac and current loops; empty selects loop-shaped
  /// defaults. The PLL and filter settings below always apply.
  std::optional<ControlGains> gains;
  double current_bandwidth_hz{500.0};
  PllParams pll;
  double v_filter_hz{100.0};
  NetworkParams network;
  FaultSpec fault;
  bool fault_enabled{true};
  WindProfile wind;
  FrtEnvelope envelope;
  bool statcom_enabled{true};
  bool expect_unstable{false};

  void validate() const;
};

/// Quantities derived once from a Scenario before integration.
struct ModelSetup {
  ScigParams machine;        // at the model voltage, transformer leakage included in l_s
  double leakage_inductance{0.0};  // H at the model voltage
  double ratio{1.0};         // PCC voltage / machine model voltage
  double gear_ratio{1.0};
  double inertia{0.0};       // kg m^2
  ControlGains gains;
  double ac_plant_gain{0.0}; // p.u. per A
};

ModelSetup prepare_model(const Scenario& sc);

/// Flat state layout of the composite model.
namespace idx {
inline constexpr std::size_t psi = 0;       // 4 entries
inline constexpr std::size_t omega_r = 4;
inline constexpr std::size_t i_t = 5;       // 2 entries
inline constexpr std::size_t v_dc = 7;
inline constexpr std::size_t pi_dc = 8;
inline constexpr std::size_t pi_ac = 9;
inline constexpr std::size_t pi_id = 10;
inline constexpr std::size_t pi_iq = 11;
inline constexpr std::size_t pll_phi = 12;  // frame angle minus omega_nominal t
inline constexpr std::size_t pll_int = 13;
inline constexpr std::size_t v_filt = 14;
inline constexpr std::size_t e_source = 15;
inline constexpr std::size_t e_mech = 16;
inline constexpr std::size_t e_load = 17;
inline constexpr std::size_t e_fault = 18;
inline constexpr std::size_t e_grid_loss = 19;
inline constexpr std::size_t e_copper = 20;
inline constexpr std::size_t e_filter = 21;
inline constexpr std::size_t e_dc_loss = 22;
inline constexpr std::size_t size = 23;
}  // namespace idx

struct Event {
  double time{0.0};
  std::string kind;
  std::string detail;
};

struct LimitViolation {
  double time{0.0};
  std::string quantity;
  double value{0.0};
  double limit{0.0};
};

/// Integrated energy flows over the run, J.
struct EnergyAudit {
  double source{0.0};
  double mechanical{0.0};
  double load{0.0};
  double fault{0.0};
  double grid_loss{0.0};
  double machine_copper{0.0};
  double filter_loss{0.0};
  double dc_loss{0.0};
  double stored_change{0.0};

  double mismatch() const;
  /// Total energy delivered by the sources.
  double throughput() const;
  double relative_mismatch() const;
};

/// Algebraic outputs of the composite model at one state.
struct Snapshot {
  double t{0.0};
  bool fault{false};
  Vec2 v_pcc{};
  Vec2 i_grid{};
  Vec2 i_load{};
  Vec2 i_fault{};
  Vec2 emf{};
  Vec4 i_machine{};
  Vec2 v_term{};     // machine terminal at model voltage
  double omega{0.0}; // frame speed
  double t_e{0.0};
  double t_m{0.0};
  double wind{0.0};
  TurbineDrive drive{};
  double v_filtered{0.0};
  double i_limit{0.0};
  double u_dc{0.0};
  double u_ac{0.0};
  CurrentReferences refs{};
  Vec2 u_current{};
  Vec2 v_conv{};
  bool converter_saturated{false};
  bool converter_blocked{false};
  bool pll_coasting{false};
  bool load_impedance_mode{false};
  bool network_fallback{false};
  double current_pi_limit{0.0};
};

/// Composite right-hand side. Exposed so tests can drive it directly.
class CompositeModel {
public:
  CompositeModel(const Scenario& sc, const ModelSetup& setup);

  StateVector derivative(double t, const StateVector& x, bool fault) const;
  Snapshot evaluate(double t, const StateVector& x, bool fault, StateVector* dx = nullptr) const;
  /// Magnetic, kinetic and DC-link energy stored at state x, J.
  double stored_energy(const StateVector& x) const;
  StateVector initial_state() const;

  const ModelSetup& setup() const { return setup_; }

private:
  Scenario sc_;
  ModelSetup setup_;
};

struct ScenarioResult {
  std::string name;
  TimeSeries series;
  std::vector<Event> events;
  bool diverged{false};
  double divergence_time{0.0};
  std::size_t steps{0};
  std::size_t limit_checks{0};
  std::size_t limit_violation_count{0};
  std::vector<LimitViolation> limit_violations;  // first few, for reporting
  EnergyAudit energy;
  ModelSetup setup;
  double realized_fault_start{0.0};
  double realized_fault_end{0.0};
  bool statcom_enabled{true};
  bool expect_unstable{false};
};

ScenarioResult run_scenario(const Scenario& sc);

}  // namespace frtsim
