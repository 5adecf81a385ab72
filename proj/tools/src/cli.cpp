#include "frtsim_cli/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "frtsim/errors.hpp"

namespace frtsim::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool verbose{false};
  unsigned seed{0};
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Scenario configuration file (JSON)");
  cmd->add_option("--preset", o.preset, "Bundled preset name (paper)");
  cmd->add_option("--out", o.out_dir, "Output directory (overrides output.dir)");
  cmd->add_option("--set", o.overrides, "Override a configuration key, e.g. --set sim.t_end=0.5");
  cmd->add_flag("--verbose", o.verbose, "Record controller internals in the CSV");
  cmd->add_option("--seed", o.seed, "Reserved; the models are deterministic");
}

ScenarioConfig load(const CommonOptions& o) {
  if (!o.config_path.empty() && !o.preset.empty())
    throw ConfigError("", "--config and --preset are mutually exclusive");
  ScenarioConfig cfg = !o.config_path.empty() ? parse_config(o.config_path)
                                               : preset_config(o.preset.empty() ? "paper" : o.preset);
  for (const auto& a : o.overrides) cfg = apply_override(cfg, a);
  if (o.verbose) cfg.scenario.sim.verbose = true;
  if (!o.out_dir.empty()) cfg.output.dir = o.out_dir;
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void print_summary(std::ostream& out, const ScenarioOutcome& o) {
  const Metrics& m = o.metrics;
  out << o.result.name << ": "
      << (o.result.diverged ? "diverged at t=" + fmt("%.4f", o.result.divergence_time) + " s" : "completed") << "\n"
      << "  v_pcc min/max        " << fmt("%.4f", m.v_min) << " / " << fmt("%.4f", m.v_max) << " p.u.\n"
      << "  overvoltage          " << fmt("%.2f", m.overvoltage_percent) << " %\n"
      << "  post-fault max dev   " << fmt("%.4f", m.post_fault_max_deviation) << " p.u.\n"
      << "  recovery (>=0.98)    " << fmt("%.4f", m.recovery_time) << " s\n"
      << "  settling (+-2%)      " << fmt("%.4f", m.settling_time) << " s\n"
      << "  post-fault grid Q    " << fmt("%.3f", m.post_fault_mean_grid_q / 1e6) << " MVAr (mean)\n"
      << "  peak STATCOM Q       " << fmt("%.3f", m.peak_statcom_q / 1e6) << " MVAr\n"
      << "  grid code            " << (o.verdict.pass ? "PASS" : "FAIL") << " (min margin "
      << fmt("%.4f", o.verdict.min_margin) << " p.u.)\n"
      << "  energy mismatch      " << fmt("%.3e", o.result.energy.relative_mismatch()) << " of throughput\n"
      << "  limit violations     " << o.result.limit_violation_count << " / " << o.result.limit_checks << "\n";
}

void print_violations(std::ostream& out, const GridCodeVerdict& v) {
  if (!v.complete) out << "  trace ends before the envelope window closes\n";
  std::size_t shown = 0;
  for (const auto& x : v.violations) {
    if (shown++ == 20) {
      out << "  ... " << v.violations.size() - 20 << " more\n";
      break;
    }
    out << "  " << describe(x) << "\n";
  }
}

/// Writes CSV + report for one scenario into the configured directory.
void emit(const ScenarioConfig& cfg, const ScenarioOutcome& o, unsigned seed, std::ostream& out) {
  const fs::path dir = cfg.output.dir;
  fs::create_directories(dir);
  const fs::path csv = dir / (o.result.name + ".csv");
  const fs::path report = dir / (o.result.name + ".report.json");
  write_csv(o.result.series, csv);
  write_text(report, report_json(cfg, o, seed));
  out << "  wrote " << csv.string() << " and " << report.string() << "\n";
}

int cmd_run(const CommonOptions& opt, std::ostream& out) {
  const ScenarioConfig cfg = load(opt);
  const ScenarioOutcome o = evaluate_scenario(cfg.scenario);
  print_summary(out, o);
  emit(cfg, o, opt.seed, out);
  return o.unexpected_divergence() ? kFailed : kOk;
}

int cmd_compare(const CommonOptions& opt, std::ostream& out) {
  const ScenarioConfig base = load(opt);
  const auto [with, without] = compare_pair(base);
  // Independent runs; nothing is shared between the two tasks.
  auto f_with = std::async(std::launch::async, [&] { return evaluate_scenario(with.scenario); });
  auto f_without = std::async(std::launch::async, [&] { return evaluate_scenario(without.scenario); });
  const ScenarioOutcome a = f_with.get();
  const ScenarioOutcome b = f_without.get();
  print_summary(out, a);
  print_summary(out, b);
  emit(with, a, opt.seed, out);
  emit(without, b, opt.seed, out);

  nlohmann::ordered_json j;
  j["tool"] = "frtsim";
  j["version"] = version();
  j["with_statcom"] = nlohmann::ordered_json::parse(report_json(with, a, opt.seed));
  j["without_statcom"] = nlohmann::ordered_json::parse(report_json(without, b, opt.seed));
  const double dev_with = a.metrics.post_fault_max_deviation;
  const double dev_without = b.metrics.max_deviation;
  j["comparison"] = {{"with_statcom_grid_code_pass", a.verdict.pass},
                     {"without_statcom_grid_code_pass", b.verdict.pass},
                     {"without_statcom_diverged", b.result.diverged},
                     {"with_statcom_post_fault_max_deviation_pu", dev_with},
                     {"without_statcom_max_deviation_pu", dev_without},
                     {"deviation_ratio", dev_with > 0.0 ? nlohmann::ordered_json(dev_without / dev_with)
                                                        : nlohmann::ordered_json(nullptr)}};
  const fs::path path = fs::path(base.output.dir) / (base.scenario.name + "_compare.json");
  write_text(path, j.dump(2) + "\n");
  out << "comparison: without/with deviation ratio "
      << (dev_with > 0.0 ? fmt("%.2f", dev_without / dev_with) : std::string("inf")) << "; wrote " << path.string()
      << "\n";
  return a.unexpected_divergence() || b.unexpected_divergence() ? kFailed : kOk;
}

int cmd_check(const CommonOptions& opt, const std::string& trace, std::ostream& out) {
  const ScenarioConfig cfg = load(opt);
  GridCodeVerdict v;
  if (!trace.empty()) {
    const TimeSeries ts = read_csv(trace);
    if (!ts.has("time") || !ts.has("v_pcc")) throw ConfigError("--trace", "CSV needs time[s] and v_pcc[pu] columns");
    v = grid_code_check(ts, cfg.scenario.envelope, cfg.scenario.fault);
    out << trace << ": grid code " << (v.pass ? "PASS" : "FAIL") << " (" << v.samples_checked
        << " samples checked, min margin " << fmt("%.4f", v.min_margin) << " p.u.)\n";
  } else {
    const ScenarioOutcome o = evaluate_scenario(cfg.scenario);
    v = o.verdict;
    out << o.result.name << ": grid code " << (v.pass ? "PASS" : "FAIL") << " (min margin "
        << fmt("%.4f", v.min_margin) << " p.u.)\n";
  }
  print_violations(out, v);
  return v.pass ? kOk : kFailed;
}

std::vector<double> parse_values(const std::string& list, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(key, "sweep value '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(key, "sweep needs at least one value");
  return out;
}

int cmd_sweep(const CommonOptions& opt, const std::vector<std::string>& grid, std::ostream& out) {
  const ScenarioConfig base = load(opt);
  if (grid.empty()) throw ConfigError("--grid", "sweep needs at least one --grid key=v1,v2,...");
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& g : grid) {
    const auto eq = g.find('=');
    if (eq == std::string::npos) throw ConfigError(g, "expected key=v1,v2,...");
    axes.emplace_back(g.substr(0, eq), parse_values(g.substr(eq + 1), g.substr(0, eq)));
  }

  // Cartesian product, first axis slowest.
  std::vector<ScenarioConfig> points;
  std::vector<std::vector<double>> coords;
  std::vector<std::size_t> index(axes.size(), 0);
  while (true) {
    ScenarioConfig cfg = base;
    std::vector<double> c;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double v = axes[a].second[index[a]];
      std::ostringstream assign;
      assign.precision(17);
      assign << axes[a].first << "=" << v;
      cfg = apply_override(cfg, assign.str());
      c.push_back(v);
    }
    cfg.scenario.name = base.scenario.name + "_sweep_" + std::to_string(points.size());
    points.push_back(cfg);
    coords.push_back(c);
    std::size_t a = axes.size();
    while (a > 0 && ++index[a - 1] == axes[a - 1].second.size()) index[--a] = 0;
    if (a == 0) break;
  }

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<ScenarioOutcome> outcomes(points.size());
  for (std::size_t start = 0; start < points.size(); start += workers) {
    std::vector<std::future<ScenarioOutcome>> batch;
    const std::size_t stop = std::min(points.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(std::launch::async, [&points, i] { return evaluate_scenario(points[i].scenario); }));
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = batch[i - start].get();
  }

  const fs::path dir = base.output.dir;
  fs::create_directories(dir);
  std::ostringstream table;
  table.precision(17);
  for (const auto& ax : axes) table << ax.first << ",";
  table << "diverged,grid_code_pass,v_min_pu,v_max_pu,post_fault_max_deviation_pu,settling_time_s,"
           "post_fault_mean_grid_q_var,peak_statcom_q_var\n";
  int status = kOk;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ScenarioOutcome& o = outcomes[i];
    for (double c : coords[i]) table << c << ",";
    const Metrics& m = o.metrics;
    table << (o.result.diverged ? 1 : 0) << "," << (o.verdict.pass ? 1 : 0) << "," << m.v_min << "," << m.v_max << ","
          << m.post_fault_max_deviation << "," << m.settling_time << "," << m.post_fault_mean_grid_q << ","
          << m.peak_statcom_q << "\n";
    emit(points[i], o, opt.seed, out);
    if (o.unexpected_divergence()) status = kFailed;
  }
  const fs::path summary = dir / (base.scenario.name + "_sweep.csv");
  write_text(summary, table.str());
  out << "sweep: " << points.size() << " runs; wrote " << summary.string() << "\n";
  return status;
}

}  // namespace

std::pair<ScenarioConfig, ScenarioConfig> compare_pair(const ScenarioConfig& cfg) {
  ScenarioConfig with = cfg;
  with.scenario.name = cfg.scenario.name + "_statcom";
  with.scenario.statcom_enabled = true;
  with.scenario.expect_unstable = false;
  ScenarioConfig without = cfg;
  without.scenario.name = cfg.scenario.name + "_no_statcom";
  without.scenario.statcom_enabled = false;
  without.scenario.expect_unstable = true;
  return {with, without};
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-ride-through simulator for a grid-tied SCIG wind system with STATCOM support", "frtsim"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  CommonOptions run_o, cmp_o, chk_o, swp_o, cfg_o;
  std::string trace;
  std::vector<std::string> grid;
  auto* run = app.add_subcommand("run", "Run one scenario and write CSV + report");
  add_common(run, run_o);
  auto* cmp = app.add_subcommand("compare", "Run the scenario with and without the STATCOM");
  add_common(cmp, cmp_o);
  auto* chk = app.add_subcommand("check", "Grid-code verdict for a scenario or an existing CSV trace");
  add_common(chk, chk_o);
  chk->add_option("--trace", trace, "CSV trace to check instead of running the scenario");
  auto* swp = app.add_subcommand("sweep", "Run a parameter grid");
  add_common(swp, swp_o);
  swp->add_option("--grid", grid, "Axis as key=v1,v2,... (repeatable)");
  auto* shw = app.add_subcommand("config", "Print the resolved configuration");
  add_common(shw, cfg_o);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_o, out);
    if (*cmp) return cmd_compare(cmp_o, out);
    if (*chk) return cmd_check(chk_o, trace, out);
    if (*swp) return cmd_sweep(swp_o, grid, out);
    if (*shw) {
      out << serialize_config(load(cfg_o));
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace frtsim::cli
