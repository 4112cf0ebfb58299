#include "zfchiral/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zfchiral/errors.hpp"

namespace zfchiral {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kNumericalNull = 1e-9;

std::string pulse_description(const PulseConfig& p) {
  if (p.ideal) return "ideal";
  return std::string("rotation-") + axis_name(p.axis) + "(" + format_double(p.theta1) + "," +
         format_double(p.theta2) + ")";
}

std::string channel_name(Axis a) { return std::string(1, axis_name(a)); }

Json peak_json(const FitResult& f) {
  return Json{{"f0_hz", f.peak.f0},       {"fwhm_hz", f.peak.gamma},  {"amp", f.peak.amp},
              {"phase_rad", f.peak.phase}, {"residual", f.residual}, {"iterations", f.iterations},
              {"low_confidence", f.low_confidence}};
}

Json params_json(const ZFParams& p) { return Json{{"j0_hz", p.j0}, {"j1bar_hz", p.j1bar}, {"dbar_hz", p.dbar}}; }

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

std::vector<LorentzianPeak> peaks_of(const ChannelFits& f) {
  std::vector<LorentzianPeak> out;
  for (const FitResult& r : f.peaks) out.push_back(r.peak);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
  return std::string(buf, ptr);
}

TimeSeries simulate_run(const ExperimentConfig& cfg, const ZFParams& p) {
  const SpinPair& sp = cfg.spins;
  DensityMatrix rho0;
  if (cfg.pulse.ideal) {
    rho0 = ideal_inverted_state(sp);
  } else {
    rho0 = thermal_state(sp, cfg.acquisition.prepolarization_field, cfg.acquisition.prepolarization_temperature,
                         Axis::y);
    rho0 = apply_pulse(rho0, cfg.pulse.axis, cfg.pulse.theta1, cfg.pulse.theta2);
  }
  const CMatrix h = build_hamiltonian(p, cfg.kappa);
  TimeSeries ts = propagate(rho0, h, cfg.acquisition.dt, cfg.acquisition.n, sp);
  ts.params = p;
  ts.kappa = cfg.kappa;
  ts.pulse = pulse_description(cfg.pulse);
  if (cfg.acquisition.detector_tilt != 0.0) {
    const double c = std::cos(cfg.acquisition.detector_tilt), s = std::sin(cfg.acquisition.detector_tilt);
    for (Sample& smp : ts.samples) smp.mx = c * smp.mx + s * smp.my;
  }
  return ts;
}

std::vector<double> observable_line_centers(const std::vector<Transition>& transitions) {
  std::vector<double> out;
  for (const Transition& t : transitions) {
    if (t.label.find("+-1") == std::string::npos || t.label == "+-1<->+-1") continue;
    if (t.frequency_hz <= 1e-9) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](double f) { return std::abs(f - t.frequency_hz) < 1e-6; });
    if (!dup) out.push_back(t.frequency_hz);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ChannelFits> fit_series(const std::string& run, const TimeSeries& ts, const std::vector<double>& centers,
                                    double half_width, double t2eff) {
  const TimeSeries apod = apodize(ts, t2eff);
  std::vector<ChannelFits> out;
  for (Axis ch : {Axis::x, Axis::y}) {
    const Spectrum s = transform(apod, ch);
    ChannelFits f{run, ch, {}};
    for (double c : centers) f.peaks.push_back(fit_lorentzian(s, {std::max(0.0, c - half_width), c + half_width}));
    out.push_back(std::move(f));
  }
  return out;
}

ScenarioResult run_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  RunReport& rep = result.report;
  const ZFParams base = cfg.resolved_params();
  ZFParams plus = base;
  ZFParams minus = base;
  minus.j1bar = -base.j1bar;  // dbar is even in the orienting field
  if (cfg.scenario == "achiral-control") plus.j1bar = 0.0;
  if (cfg.scenario == "enantiomer-L") plus = minus;

  rep.scenario = cfg.scenario;
  rep.params = plus;
  rep.spins = cfg.spins;
  rep.kappa = cfg.kappa;
  rep.dt = cfg.acquisition.dt;
  rep.n = cfg.acquisition.n;
  rep.t2eff = cfg.acquisition.t2eff;
  rep.pulse = pulse_description(cfg.pulse);
  rep.order_parameter = cfg.cartesian ? cfg.resolved_order_parameter() : 0.0;
  rep.transitions = transition_frequencies(build_hamiltonian(plus, cfg.kappa));
  rep.peak_centers_hz = observable_line_centers(rep.transitions);
  rep.analytic_ratio = amplitude_ratio(cfg.spins, plus.j1bar / plus.j0);

  const double hw = cfg.acquisition.fit_half_width;
  const double t2 = cfg.acquisition.t2eff;
  const auto& centers = rep.peak_centers_hz;
  const double match_tol = 2.0 / (static_cast<double>(cfg.acquisition.n) * cfg.acquisition.dt);

  auto add_spectra = [&](const std::string& run, const TimeSeries& ts) {
    const TimeSeries apod = apodize(ts, t2);
    result.spectra.push_back({run, transform(apod, Axis::x)});
    result.spectra.push_back({run, transform(apod, Axis::y)});
  };
  // An x channel with no line above its noise floor, or only round-off
  // relative to y, yields a null ratio instead of matching noise peaks.
  auto ratio_from = [&](const std::vector<ChannelFits>& fits) {
    double y_max = 0.0;
    for (const FitResult& f : fits[1].peaks) y_max = std::max(y_max, f.peak.amp);
    const auto& xp = fits[0].peaks;
    if (std::all_of(xp.begin(), xp.end(), [&](const FitResult& f) {
          return f.low_confidence || f.peak.amp < kNumericalNull * y_max;
        })) {
      return ChannelRatio{};
    }
    return channel_ratio(peaks_of(fits[0]), peaks_of(fits[1]), match_tol);
  };

  const bool pair = cfg.scenario == "enantiomer-pair" || cfg.scenario == "racemic" || cfg.scenario == "field-reversal";
  if (!pair) {
    const std::string run = cfg.scenario == "enantiomer-L" ? "minus" : (cfg.scenario == "achiral-control" ? "achiral" : "plus");
    TimeSeries ts = simulate_run(cfg, plus);
    rep.fits = fit_series(run, ts, centers, hw, t2);
    rep.ratio = ratio_from(rep.fits);
    add_spectra(run, ts);
    result.series.push_back({run, std::move(ts)});
  } else {
    TimeSeries ts_plus = simulate_run(cfg, plus);
    TimeSeries ts_minus = simulate_run(cfg, minus);
    if (cfg.scenario == "enantiomer-pair") {
      rep.fits = fit_series("plus", ts_plus, centers, hw, t2);
      auto fm = fit_series("minus", ts_minus, centers, hw, t2);
      rep.fits.insert(rep.fits.end(), fm.begin(), fm.end());
      rep.ratio = ratio_from(rep.fits);
      rep.comparison = compare_enantiomers(ts_plus, ts_minus, PeakSearch{centers, hw, t2});
      add_spectra("plus", ts_plus);
      add_spectra("minus", ts_minus);
    } else if (cfg.scenario == "racemic") {
      TimeSeries avg = average_series(ts_plus, ts_minus);
      double mx = 0.0, my = 0.0;
      for (const Sample& s : avg.samples) {
        mx = std::max(mx, std::abs(s.mx));
        my = std::max(my, std::abs(s.my));
      }
      rep.racemic_max_x = mx;
      rep.racemic_max_y = my;
      rep.comparison = compare_enantiomers(ts_plus, ts_minus, PeakSearch{{}, hw, t2});
      add_spectra("racemic", avg);
      result.series.push_back({"racemic", std::move(avg)});
    } else {
      // Field reversal: subtract the x spectra of the two field polarities.
      const TimeSeries ap = apodize(ts_plus, t2), am = apodize(ts_minus, t2);
      const Spectrum xp = transform(ap, Axis::x), xm = transform(am, Axis::x);
      const Spectrum diff = field_reversal_subtract(xp, xm);
      const Spectrum yp = transform(ap, Axis::y);
      ChannelFits fx{"subtracted", Axis::x, {}}, fy{"plus", Axis::y, {}};
      for (double c : centers) {
        const FitWindow w{std::max(0.0, c - hw), c + hw};
        fx.peaks.push_back(fit_lorentzian(diff, w));
        fy.peaks.push_back(fit_lorentzian(yp, w));
      }
      rep.fits = {fx, fy};
      rep.ratio = ratio_from(rep.fits);
      result.spectra.push_back({"plus", xp});
      result.spectra.push_back({"minus", xm});
      result.spectra.push_back({"subtracted", diff});
      result.spectra.push_back({"plus", yp});
    }
    result.series.push_back({"plus", std::move(ts_plus)});
    result.series.push_back({"minus", std::move(ts_minus)});
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string series_csv(const TimeSeries& ts) {
  std::string out = "t_s,Mx,My,Mz\n";
  out.reserve(ts.size() * 80);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Sample& s = ts.samples[k];
    out += format_double(ts.time(k));
    out += ',';
    out += format_double(s.mx);
    out += ',';
    out += format_double(s.my);
    out += ',';
    out += format_double(s.mz);
    out += '\n';
  }
  return out;
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open series file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "t_s,Mx,My,Mz") {
    throw ValidationError(path + ": expected header 't_s,Mx,My,Mz'");
  }
  TimeSeries ts;
  std::vector<double> times;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 4; ++i) {
      auto [ptr, ec] = std::from_chars(p, end, v[i]);
      if (ec != std::errc() || (i < 3 && (ptr == end || *ptr != ',')) || (i == 3 && ptr != end)) {
        throw ValidationError(path + ": line " + std::to_string(lineno) + ": malformed row");
      }
      p = ptr + 1;
    }
    times.push_back(v[0]);
    ts.samples.push_back({v[1], v[2], v[3]});
  }
  if (ts.samples.size() < 2) throw ValidationError(path + ": need at least two samples");
  ts.dt = times[1] - times[0];
  if (!(ts.dt > 0.0)) throw ValidationError(path + ": time column must increase");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(times[k] - static_cast<double>(k) * ts.dt) > 1e-9 * std::max(1.0, times[k])) {
      throw ValidationError(path + ": non-uniform sampling at row " + std::to_string(k + 2));
    }
  }
  return ts;
}

std::string comparison_json(const EnantiomerComparison& c) {
  Json peaks = Json::array();
  for (const auto& p : c.peaks) {
    peaks.push_back(Json{{"f0_hz", p.f0},
                         {"phase_plus_rad", p.phase_plus},
                         {"phase_minus_rad", p.phase_minus},
                         {"phase_difference_rad", p.difference},
                         {"amp_plus", p.amp_plus},
                         {"amp_minus", p.amp_minus}});
  }
  Json j{{"x_correlation", c.x_correlation}, {"max_abs_x_sum", c.max_abs_x_sum}, {"max_abs_x", c.max_abs_x},
         {"max_abs_y", c.max_abs_y},         {"y_max_difference", c.y_max_difference}, {"peaks", peaks}};
  return j.dump(2) + "\n";
}

std::string report_json(const RunReport& r) {
  Json transitions = Json::array();
  for (const auto& t : r.transitions) transitions.push_back(Json{{"frequency_hz", t.frequency_hz}, {"label", t.label}});
  Json fits = Json::array();
  for (const auto& f : r.fits) {
    Json peaks = Json::array();
    for (const auto& p : f.peaks) peaks.push_back(peak_json(p));
    fits.push_back(Json{{"run", f.run}, {"channel", channel_name(f.channel)}, {"peaks", peaks}});
  }
  Json j;
  j["scenario"] = r.scenario;
  j["parameters"] = Json{{"couplings", params_json(r.params)},
                         {"gamma1_mhz_per_t", r.spins.gamma1},
                         {"gamma2_mhz_per_t", r.spins.gamma2},
                         {"labels", Json::array({r.spins.label1, r.spins.label2})},
                         {"kappa", r.kappa},
                         {"dt_s", r.dt},
                         {"n", r.n},
                         {"t2eff_s", std::isinf(r.t2eff) ? Json("inf") : Json(r.t2eff)},
                         {"pulse", r.pulse},
                         {"order_parameter", r.order_parameter}};
  j["transitions"] = transitions;
  j["peak_centers_hz"] = r.peak_centers_hz;
  j["fits"] = fits;
  if (r.ratio) {
    j["ratio"] = Json{{"magnitude", r.ratio->magnitude},
                      {"sign", r.ratio->sign},
                      {"phase_offsets_rad", r.ratio->phase_offsets}};
  }
  j["analytic_ratio"] = Json{{"magnitude", r.analytic_ratio.magnitude},
                             {"sign", r.analytic_ratio.sign},
                             {"sign_simulation_convention",
                              static_cast<int>(r.analytic_ratio.sign * kMxSignRelativeToSimulation)}};
  if (r.comparison) j["comparison"] = Json::parse(comparison_json(*r.comparison));
  if (r.racemic_max_x) j["racemic"] = Json{{"max_abs_x", *r.racemic_max_x}, {"max_abs_y", *r.racemic_max_y}};
  return j.dump(2) + "\n";
}

std::string spectra_json(const std::vector<NamedSpectrum>& spectra) {
  Json arr = Json::array();
  for (const auto& ns : spectra) {
    const Spectrum& s = ns.spectrum;
    std::vector<double> re, im;
    re.reserve(s.size());
    im.reserve(s.size());
    for (const Complex& c : s.value) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    arr.push_back(Json{{"run", ns.run},
                       {"channel", channel_name(s.channel)},
                       {"n_samples", s.n_samples},
                       {"n_padded", s.n_padded},
                       {"bin_width_hz", s.bin_width()},
                       {"t2eff_s", std::isinf(s.t2eff) ? Json("inf") : Json(s.t2eff)},
                       {"freq_hz", s.freq_hz},
                       {"re", re},
                       {"im", im}});
  }
  return Json{{"spectra", arr}}.dump() + "\n";
}

std::string orientation_json(const OrientationReport& r) {
  const auto& c = r.conditions;
  Json j{{"conditions", Json{{"mu_debye", c.mu_debye},
                             {"e_applied_v_per_m", c.e_applied},
                             {"eps_r", c.eps_r},
                             {"temperature_k", c.temperature},
                             {"bond_length_m", c.bond_length},
                             {"gamma1_mhz_per_t", c.gamma1},
                             {"gamma2_mhz_per_t", c.gamma2}}},
         {"order_parameter_at_applied_field", r.s_at_applied},
         {"target_order_parameter", r.s_target},
         {"field_for_target_v_per_m", r.field_for_target},
         {"quoted_field_v_per_m", r.quoted_field},
         {"order_parameter_at_quoted_field", r.s_at_quoted_field},
         {"field_discrepancy_factor", r.discrepancy_factor},
         {"dipolar_constant_hz", r.dipolar_constant_hz},
         {"residual_dipolar_at_target_hz", r.residual_dipolar_hz}};
  return j.dump(2) + "\n";
}

std::string analytic_json(const SpinPair& sp, const PerturbedEigensystem& sys, const CoherenceTable& table) {
  auto entries = [&](Observable o) {
    Json arr = Json::array();
    for (int pm : {1, -1}) {
      const CoherenceEntry& e = table.entry(o, pm);
      arr.push_back(Json{{"pm", pm},
                         {"v_alpha", complex_json(e.v_alpha)},
                         {"v_beta", complex_json(e.v_beta)},
                         {"rho_alpha", complex_json(e.rho_alpha)},
                         {"rho_beta", complex_json(e.rho_beta)}});
    }
    return arr;
  };
  const SignedRatio ratio = amplitude_ratio(sp, sys.j1bar / sys.j0);
  const double r = sys.j1bar / sys.j0;
  Json j{{"couplings", Json{{"j0_hz", sys.j0}, {"j1bar_hz", sys.j1bar}, {"dbar_hz", sys.dbar}}},
         {"mixing", complex_json(sys.mixing)},
         {"norm", sys.norm},
         {"energies_hz", Json{{"alpha", sys.energy_alpha}, {"beta", sys.energy_beta}, {"pm1", sys.energy_pm1}}},
         {"omega_alpha_rad_s", sys.omega_alpha()},
         {"omega_beta_rad_s", sys.omega_beta()},
         {"beyond_perturbative", sys.beyond_perturbative},
         {"mx_prefactor", 4.0 * sp.gamma1 * sp.gamma2 * r / (sys.norm * sys.norm)},
         {"my_prefactor", -(sp.gamma1 * sp.gamma1 - sp.gamma2 * sp.gamma2) * (1.0 + r * r) / (sys.norm * sys.norm)},
         {"amplitude_ratio", Json{{"magnitude", ratio.magnitude}, {"sign", ratio.sign}}},
         {"coherence_table_trace_normalized", Json{{"mx", entries(Observable::mx)}, {"my", entries(Observable::my)}}}};
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot write '" + tmp + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw NumericalError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw NumericalError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

EmittedFiles emit_outputs(const ScenarioResult& result, const OutputConfig& out, const std::string& prefix) {
  std::error_code ec;
  std::filesystem::create_directories(out.directory, ec);
  if (ec) throw NumericalError("cannot create output directory '" + out.directory + "': " + ec.message());
  const std::filesystem::path dir(out.directory);
  EmittedFiles files;
  for (const auto& ns : result.series) {
    const std::string p = (dir / (prefix + "_" + ns.run + "_series.csv")).string();
    write_file_atomic(p, series_csv(ns.series));
    files.series.push_back(p);
  }
  files.spectra = (dir / (prefix + "_spectra.json")).string();
  write_file_atomic(files.spectra, spectra_json(result.spectra));
  files.report = (dir / (prefix + "_report.json")).string();
  write_file_atomic(files.report, report_json(result.report));
  return files;
}

}  // namespace zfchiral
