#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "frtsim/config.hpp"
#include "frtsim/errors.hpp"

using namespace frtsim;

namespace {

const std::filesystem::path kPreset = std::filesystem::path(FRTSIM_PRESET_DIR) / "paper.scenario";

std::string error_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  EXPECT_EQ(serialize_config(parse_config_text("")), serialize_config(default_config()));
  EXPECT_EQ(serialize_config(parse_config_text("  \n\t")), serialize_config(default_config()));
  EXPECT_EQ(serialize_config(parse_config_text("{}")), serialize_config(default_config()));
}

TEST(Config, BundledPresetEqualsDefaults) {
  EXPECT_EQ(serialize_config(parse_config(kPreset)), serialize_config(default_config()));
  EXPECT_EQ(serialize_config(preset_config("paper")), serialize_config(default_config()));
  EXPECT_THROW(preset_config("other"), ConfigError);
}

TEST(Config, PresetCarriesSystemParameters) {
  const Scenario s = parse_config(kPreset).scenario;
  EXPECT_EQ(s.turbine.rated_power, 1.5e6);
  EXPECT_EQ(s.turbine.rated_wind, 12.0);
  EXPECT_EQ(s.machine.inertia_constant, 64.0);
  EXPECT_EQ(s.machine.rated_voltage, 500.0);
  EXPECT_NEAR(s.machine.base_omega, 2.0 * std::numbers::pi * 50.0, 1e-12);
  EXPECT_EQ(s.machine.r_s, 0.01);
  EXPECT_EQ(s.machine.r_r, 0.01);
  EXPECT_EQ(s.machine.l_s, 0.041);
  EXPECT_EQ(s.machine.l_r, 0.041);
  EXPECT_EQ(s.machine.l_m, 0.035);
  EXPECT_EQ(s.machine.power_factor, 0.85);
  EXPECT_EQ(s.network.line_impedance_per_km, Complex(0.12, -2.78));
  EXPECT_EQ(s.network.load, Complex(80e6, 10e6));
  EXPECT_EQ(s.statcom.s_rated, 25e6);
}

TEST(Config, PresetFaultWindow) {
  const Scenario s = parse_config(kPreset).scenario;
  EXPECT_EQ(s.fault.t_start, 0.8);
  EXPECT_EQ(s.fault.t_end, 0.82);
  EXPECT_TRUE(s.fault_enabled);
}

TEST(Config, RoundTrip) {
  ScenarioConfig cfg = default_config();
  cfg.scenario.sim.t_end = 0.37;
  cfg.scenario.network.grid_impedance = {1.0 / 3.0, 40.0};
  cfg.scenario.wind.segments.push_back({1.5, 7.25, true});
  cfg.output.dir = "elsewhere";
  const std::string text = serialize_config(cfg);
  EXPECT_EQ(serialize_config(parse_config_text(text)), text);
}

TEST(Config, InvariantViolationNamesKey) {
  EXPECT_EQ(error_key(R"({"scig": {"r_s": -1}})"), "scig.r_s");
  EXPECT_EQ(error_key(R"({"sim": {"dt": 0}})"), "sim.dt");
  EXPECT_EQ(error_key(R"({"fault": {"t_start": 0.9, "t_end": 0.85}})"), "fault.t_start");
}

TEST(Config, UnknownAndMistypedKeys) {
  EXPECT_EQ(error_key(R"({"scig": {"rs": 0.01}})"), "scig.rs");
  EXPECT_EQ(error_key(R"({"scig": {"r_s": "small"}})"), "scig.r_s");
  EXPECT_EQ(error_key(R"({"sim": {"solver": "midpoint"}})"), "sim.solver");
  EXPECT_THROW(parse_config_text("{\"sim\": "), ConfigError);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(parse_config("/nonexistent/frtsim.scenario"), ConfigError);
}

TEST(Config, PartialGainsOverride) {
  const ScenarioConfig cfg = parse_config_text(R"({"control": {"gains": {"ac": {"k_i": 1234}}}})");
  ASSERT_TRUE(cfg.scenario.gains.has_value());
  EXPECT_EQ(cfg.scenario.gains->ac.k_i, 1234.0);
  const ModelSetup tuned = prepare_model(default_config().scenario);
  EXPECT_EQ(cfg.scenario.gains->current.k_p, tuned.gains.current.k_p);
}

TEST(Config, DottedOverride) {
  ScenarioConfig cfg = apply_override(default_config(), "sim.t_end=0.25");
  EXPECT_EQ(cfg.scenario.sim.t_end, 0.25);
  cfg = apply_override(cfg, "statcom.enabled=false");
  EXPECT_FALSE(cfg.scenario.statcom_enabled);
  cfg = apply_override(cfg, "sim.solver=euler");
  EXPECT_EQ(cfg.scenario.sim.solver, Solver::Euler);
  EXPECT_THROW(apply_override(cfg, "scig.r_s=-1"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "no_equals_sign"), ConfigError);
}
