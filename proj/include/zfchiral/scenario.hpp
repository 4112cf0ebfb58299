#pragma once

// Scenario orchestration and artifact emission.

#include <optional>
#include <string>
#include <vector>

#include "zfchiral/analytic.hpp"
#include "zfchiral/config.hpp"
#include "zfchiral/spectra.hpp"

namespace zfchiral {

struct ChannelFits {
  std::string run;
  Axis channel = Axis::x;
  std::vector<FitResult> peaks;
};

struct RunReport {
  std::string scenario;
  ZFParams params;
  SpinPair spins;
  double kappa = kDefaultKappa;
  double dt = 0.0;
  std::size_t n = 0;
  double t2eff = 0.0;
  std::string pulse;
  double order_parameter = 0.0;  // as resolved (only meaningful for Cartesian input)
  std::vector<Transition> transitions;
  std::vector<double> peak_centers_hz;
  std::vector<ChannelFits> fits;
  std::optional<ChannelRatio> ratio;
  SignedRatio analytic_ratio;
  std::optional<EnantiomerComparison> comparison;
  std::optional<double> racemic_max_x;  // max |<Mx>| of the racemic average
  std::optional<double> racemic_max_y;
  double wall_seconds = 0.0;  // not written to files
};

struct NamedSeries {
  std::string run;
  TimeSeries series;
};

struct NamedSpectrum {
  std::string run;
  Spectrum spectrum;
};

struct ScenarioResult {
  RunReport report;
  std::vector<NamedSeries> series;
  std::vector<NamedSpectrum> spectra;
};

/// Propagate one run: Hamiltonian from `p`, initial state from the pulse
/// configuration, detector tilt applied to the x channel.
TimeSeries simulate_run(const ExperimentConfig& cfg, const ZFParams& p);

/// Centres of the observable lines (transitions touching |+-1>), deduplicated.
std::vector<double> observable_line_centers(const std::vector<Transition>& transitions);

/// Fit both channels of a series at the given centres.
std::vector<ChannelFits> fit_series(const std::string& run, const TimeSeries& ts, const std::vector<double>& centers,
                                    double half_width, double t2eff);

ScenarioResult run_scenario(const ExperimentConfig& cfg);

struct EmittedFiles {
  std::vector<std::string> series;
  std::string spectra;
  std::string report;
};

/// Writes <prefix>_<run>_series.csv, <prefix>_spectra.json and
/// <prefix>_report.json into `directory`, each via temp file + rename.
EmittedFiles emit_outputs(const ScenarioResult& result, const OutputConfig& out, const std::string& prefix);

std::string series_csv(const TimeSeries& ts);
TimeSeries read_series_csv(const std::string& path);

std::string report_json(const RunReport& report);
std::string spectra_json(const std::vector<NamedSpectrum>& spectra);
std::string comparison_json(const EnantiomerComparison& c);
std::string orientation_json(const OrientationReport& r);
std::string analytic_json(const SpinPair& sp, const PerturbedEigensystem& sys, const CoherenceTable& table);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace zfchiral
