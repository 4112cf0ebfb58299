// zfchiral command-line front end.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zfchiral/errors.hpp"
#include "zfchiral/scenario.hpp"
#include "zfchiral/selftest.hpp"

using namespace zfchiral;

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a config value, section.key=value (repeatable)");
}

ExperimentConfig load(const CommonOptions& o) {
  ExperimentConfig cfg = load_config(o.config);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects section.key=value, got '" + kv + "'");
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string ratio_line(const ChannelRatio& r) {
  return "ratio |Ax/Ay| = " + format_double(r.magnitude) + " sign " + std::to_string(r.sign);
}

int cmd_simulate(const CommonOptions& o, const std::string& scenario, const std::string& out, const std::string& prefix) {
  ExperimentConfig cfg = load(o);
  if (!scenario.empty()) apply_override(cfg, "scenario", scenario);
  if (!out.empty()) cfg.output.directory = out;
  if (!prefix.empty()) cfg.output.prefix = prefix;
  cfg.validate();
  const ScenarioResult res = run_scenario(cfg);
  const EmittedFiles files = emit_outputs(res, cfg.output, cfg.output_prefix());
  const RunReport& r = res.report;
  std::cout << "scenario " << r.scenario << "\n";
  for (double f : r.peak_centers_hz) std::cout << "line " << format_double(f) << " Hz\n";
  if (r.ratio) std::cout << ratio_line(*r.ratio) << "\n";
  std::cout << "analytic ratio = " << format_double(r.analytic_ratio.magnitude) << " sign " << r.analytic_ratio.sign
            << " (simulation convention " << r.analytic_ratio.sign * kMxSignRelativeToSimulation << ")\n";
  if (r.racemic_max_x) std::cout << "racemic max|Mx| = " << format_double(*r.racemic_max_x) << "\n";
  for (const auto& f : files.series) std::cout << "wrote " << f << "\n";
  std::cout << "wrote " << files.spectra << "\nwrote " << files.report << "\n";
  std::cerr << "elapsed " << r.wall_seconds << " s\n";
  return 0;
}

int cmd_analytic(const CommonOptions& o, double mixing_scale, bool second_order) {
  const ExperimentConfig cfg = load(o);
  const ZFParams p = cfg.resolved_params();
  const PerturbedEigensystem sys = perturbed_states(p.j0, p.j1bar, p.dbar, {mixing_scale, second_order});
  if (sys.beyond_perturbative) std::cerr << "warning: |j1bar/j0| > 0.1, first-order expressions are unreliable\n";
  std::cout << analytic_json(cfg.spins, sys, coherence_table(cfg.spins, sys));
  return 0;
}

int cmd_fit(const CommonOptions& o, const std::string& series) {
  const ExperimentConfig cfg = load(o);
  const TimeSeries ts = read_series_csv(series);
  const auto centers = observable_line_centers(transition_frequencies(build_hamiltonian(cfg.resolved_params(), cfg.kappa)));
  const auto fits = fit_series("input", ts, centers, cfg.acquisition.fit_half_width, cfg.acquisition.t2eff);
  RunReport r;
  r.scenario = "fit";
  r.params = cfg.resolved_params();
  r.spins = cfg.spins;
  r.kappa = cfg.kappa;
  r.dt = ts.dt;
  r.n = ts.size();
  r.t2eff = cfg.acquisition.t2eff;
  r.pulse = "input";
  r.peak_centers_hz = centers;
  r.fits = fits;
  std::vector<LorentzianPeak> px, py;
  for (const auto& f : fits[0].peaks) px.push_back(f.peak);
  for (const auto& f : fits[1].peaks) py.push_back(f.peak);
  r.ratio = channel_ratio(px, py, 2.0 / (static_cast<double>(ts.size()) * ts.dt));
  r.analytic_ratio = amplitude_ratio(cfg.spins, r.params.j1bar / r.params.j0);
  std::cout << report_json(r);
  return 0;
}

int cmd_compare(const CommonOptions& o, const std::string& plus, const std::string& minus) {
  const ExperimentConfig cfg = load(o);
  const TimeSeries a = read_series_csv(plus), b = read_series_csv(minus);
  if (a.size() != b.size() || a.dt != b.dt) throw ValidationError("compare: series differ in length or dt");
  const auto centers = observable_line_centers(transition_frequencies(build_hamiltonian(cfg.resolved_params(), cfg.kappa)));
  std::cout << comparison_json(
      compare_enantiomers(a, b, PeakSearch{centers, cfg.acquisition.fit_half_width, cfg.acquisition.t2eff}));
  return 0;
}

int cmd_orient(const CommonOptions& o, double s_target, double quoted_field) {
  const ExperimentConfig cfg = load(o);
  std::cout << orientation_json(orientation_report(cfg.orientation, s_target, quoted_field));
  return 0;
}

int cmd_selftest() {
  int failed = 0;
  for (const SelftestCheck& c : run_selftest()) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.name << " [" << c.detail << "]\n";
    if (!c.passed) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " check(s) failed\n" : std::string("all checks passed\n"));
  return failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-field NMR simulator for chiral two-spin systems"};
  app.require_subcommand(1);

  CommonOptions sim_o, an_o, fit_o, cmp_o, or_o;
  std::string scenario, out_dir, prefix, series, plus, minus;
  double mixing_scale = 0.5, s_target = 0.01, quoted_field = 5e5;
  bool second_order = false;

  auto* sim = app.add_subcommand("simulate", "Run a scenario and write series, spectra and report");
  add_common(sim, sim_o);
  sim->add_option("--scenario", scenario, "Scenario name (overrides config)");
  sim->add_option("--out", out_dir, "Output directory (overrides config)");
  sim->add_option("--prefix", prefix, "Output file prefix (overrides config)");

  auto* an = app.add_subcommand("analytic", "Print the first-order perturbative eigensystem and coherence table");
  add_common(an, an_o);
  an->add_option("--mixing-scale", mixing_scale, "c = -i scale j1bar/j0");
  an->add_flag("--second-order", second_order, "Include second-order energy shifts");

  auto* fit = app.add_subcommand("fit", "Fit Lorentzian lines in a series CSV");
  add_common(fit, fit_o);
  fit->add_option("--series", series, "Series CSV (t_s,Mx,My,Mz)")->required()->check(CLI::ExistingFile);

  auto* cmp = app.add_subcommand("compare", "Compare the x channels of two enantiomer series");
  add_common(cmp, cmp_o);
  cmp->add_option("--plus", plus, "Series CSV for +j1bar")->required()->check(CLI::ExistingFile);
  cmp->add_option("--minus", minus, "Series CSV for -j1bar")->required()->check(CLI::ExistingFile);

  auto* ori = app.add_subcommand("orient", "Order parameter, field and residual dipolar report");
  add_common(ori, or_o);
  ori->add_option("--target", s_target, "Target order parameter");
  ori->add_option("--quoted-field", quoted_field, "Quoted field to compare against, V/m");

  auto* st = app.add_subcommand("selftest", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_o, scenario, out_dir, prefix);
    if (*an) return cmd_analytic(an_o, mixing_scale, second_order);
    if (*fit) return cmd_fit(fit_o, series);
    if (*cmp) return cmd_compare(cmp_o, plus, minus);
    if (*ori) return cmd_orient(or_o, s_target, quoted_field);
    if (*st) return cmd_selftest();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
