#pragma once

// Frequency-domain analysis: apodization, real-input DFT, complex Lorentzian
// least-squares fitting, enantiomer comparison and field-reversal subtraction.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zfchiral/dynamics.hpp"

namespace zfchiral {

struct Spectrum {
  std::vector<double> freq_hz;       // 0, df, ..., n_padded/2 * df
  std::vector<Complex> value;        // dt-scaled DFT
  Axis channel = Axis::x;
  double dt = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_padded = 0;
  double t2eff = 0.0;  // apodization recorded on the source series

  double bin_width() const { return 1.0 / (static_cast<double>(n_padded) * dt); }
  std::size_t size() const { return value.size(); }
};

struct LorentzianPeak {
  double f0 = 0.0;     // Hz
  double gamma = 0.0;  // FWHM, Hz
  double amp = 0.0;
  double phase = 0.0;  // (-pi, pi]

  Complex model(double f) const;
};

struct FitWindow {
  double lo = 0.0, hi = 0.0;  // Hz
};

struct FitResult {
  LorentzianPeak peak;
  double residual = 0.0;  // RMS of |model - data| over the window
  int iterations = 0;
  bool low_confidence = false;  // amp below 10x the window-edge RMS, or width pinned at the lower bound
};

inline constexpr int kMaxFitIterations = 500;
inline constexpr double kMinHalfWidthBins = 0.1;  // lower bound on the fitted half width

/// Multiply each channel by exp(-t / t2eff). t2eff = +infinity leaves the
/// samples untouched.
TimeSeries apodize(const TimeSeries& ts, double t2eff);

/// Positive-frequency half of the dt-scaled DFT of one channel, zero-padded
/// to the next power of two. Yields n_padded/2 + 1 bins.
Spectrum transform(const TimeSeries& ts, Axis channel);
Spectrum transform(const std::vector<double>& samples, double dt, Axis channel = Axis::x);

/// sum x^2 dt and the matching two-sided spectral energy sum |X|^2 df.
double time_energy(const std::vector<double>& samples, double dt);
double spectral_energy(const Spectrum& s);

/// Levenberg-Marquardt fit of amp e^{i phase} (g/2)/((g/2) + i (f - f0)) to the
/// complex data inside `window`. Without `init` the guess is the tallest bin
/// with a width of two bins. The half width is bounded below by
/// kMinHalfWidthBins bins. Throws NumericalError on non-convergence.
FitResult fit_lorentzian(const Spectrum& s, FitWindow window, std::optional<LorentzianPeak> init = std::nullopt);

struct ChannelRatio {
  double magnitude = 0.0;
  int sign = 0;                       // relative sign of the lowest-frequency matched pair
  std::vector<double> phase_offsets;  // phase_x - phase_y per matched peak, wrapped
};

/// Sum of fitted x amplitudes over sum of fitted y amplitudes. Peaks are
/// matched by centre frequency within `tolerance_hz`.
ChannelRatio channel_ratio(const std::vector<LorentzianPeak>& peaks_x, const std::vector<LorentzianPeak>& peaks_y,
                           double tolerance_hz);

/// (a - b)/2 per bin.
Spectrum field_reversal_subtract(const Spectrum& a, const Spectrum& b);

struct PeakPhaseDifference {
  double f0 = 0.0;
  double phase_plus = 0.0, phase_minus = 0.0;
  double difference = 0.0;  // wrapped to (-pi, pi]
  double amp_plus = 0.0, amp_minus = 0.0;
};

struct EnantiomerComparison {
  double x_correlation = 0.0;  // sum(a b)/sqrt(sum a^2 sum b^2) of the x channels
  double max_abs_x_sum = 0.0;  // max |x+ + x-|
  double max_abs_x = 0.0;      // max over both x channels
  double max_abs_y = 0.0;
  double y_max_difference = 0.0;
  std::vector<PeakPhaseDifference> peaks;  // x-channel fits
};

struct PeakSearch {
  std::vector<double> centers_hz;
  double half_width_hz = 2.0;
  double t2eff = 2.0;
};

EnantiomerComparison compare_enantiomers(const TimeSeries& plus, const TimeSeries& minus,
                                         const PeakSearch& search);

/// Pointwise (a + b)/2 of two series with identical acquisition.
TimeSeries average_series(const TimeSeries& a, const TimeSeries& b);

double wrap_phase(double phi);

}  // namespace zfchiral
