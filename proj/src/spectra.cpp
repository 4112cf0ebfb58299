#include "zfchiral/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <fftw3.h>

#include "zfchiral/errors.hpp"

namespace zfchiral {

namespace {

constexpr double kPi = constants::pi;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

// Real-to-half-complex FFT with zero padding; unnormalized forward sign.
std::vector<Complex> rfft(const std::vector<double>& x, std::size_t n_padded) {
  std::unique_ptr<double[], FftwDeleter> in(static_cast<double*>(fftw_malloc(sizeof(double) * n_padded)));
  std::unique_ptr<fftw_complex[], FftwDeleter> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n_padded / 2 + 1))));
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_padded), in.get(), out.get(), FFTW_ESTIMATE);
  if (plan == nullptr) throw NumericalError("transform: FFT plan creation failed");
  std::fill(in.get(), in.get() + n_padded, 0.0);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<Complex> result(n_padded / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = Complex(out[k][0], out[k][1]);
  return result;
}

struct WindowData {
  std::vector<double> f;
  std::vector<Complex> y;
};

WindowData extract(const Spectrum& s, FitWindow w) {
  WindowData d;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.freq_hz[k] >= w.lo && s.freq_hz[k] <= w.hi) {
      d.f.push_back(s.freq_hz[k]);
      d.y.push_back(s.value[k]);
    }
  }
  return d;
}

// Parameters: f0, half width, Re c, Im c.
using Params = Eigen::Vector4d;

double cost(const WindowData& d, const Params& p) {
  const Complex c(p(2), p(3));
  double sum = 0.0;
  for (std::size_t k = 0; k < d.f.size(); ++k) {
    const Complex model = c * p(1) / Complex(p(1), d.f[k] - p(0));
    sum += std::norm(model - d.y[k]);
  }
  return sum;
}

}  // namespace

Complex LorentzianPeak::model(double f) const {
  const double hw = 0.5 * gamma;
  return std::polar(amp, phase) * hw / Complex(hw, f - f0);
}

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

TimeSeries apodize(const TimeSeries& ts, double t2eff) {
  if (!(t2eff > 0.0)) throw ValidationError("apodize: t2eff must be > 0");
  TimeSeries out = ts;
  out.t2eff = t2eff;
  if (std::isinf(t2eff)) return out;
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    const double w = std::exp(-ts.time(k) / t2eff);
    out.samples[k].mx *= w;
    out.samples[k].my *= w;
    out.samples[k].mz *= w;
  }
  return out;
}

Spectrum transform(const std::vector<double>& samples, double dt, Axis channel) {
  if (samples.size() < 2) throw ValidationError("transform: need at least two samples");
  if (!(dt > 0.0)) throw ValidationError("transform: dt must be > 0");
  Spectrum s;
  s.channel = channel;
  s.dt = dt;
  s.n_samples = samples.size();
  s.n_padded = next_pow2(samples.size());
  const std::vector<Complex> raw = rfft(samples, s.n_padded);
  s.value.resize(raw.size());
  s.freq_hz.resize(raw.size());
  const double df = s.bin_width();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    s.value[k] = dt * raw[k];
    s.freq_hz[k] = static_cast<double>(k) * df;
  }
  return s;
}

Spectrum transform(const TimeSeries& ts, Axis channel) {
  Spectrum s = transform(ts.channel(channel), ts.dt, channel);
  s.t2eff = ts.t2eff;
  return s;
}

double time_energy(const std::vector<double>& samples, double dt) {
  double sum = 0.0;
  for (double x : samples) sum += x * x;
  return sum * dt;
}

double spectral_energy(const Spectrum& s) {
  // Real input: bins 1..n/2-1 stand for a conjugate pair each.
  double sum = 0.0;
  const std::size_t last = s.size() - 1;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double w = (k == 0 || k == last) ? 1.0 : 2.0;
    sum += w * std::norm(s.value[k]);
  }
  return sum * s.bin_width();
}

FitResult fit_lorentzian(const Spectrum& s, FitWindow window, std::optional<LorentzianPeak> init) {
  const WindowData d = extract(s, window);
  const std::size_t m = d.f.size();
  if (m < 8) {
    throw ValidationError("fit_lorentzian: window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                          "] Hz holds " + std::to_string(m) + " bins, need >= 8");
  }

  Params p;
  if (init) {
    p << init->f0, 0.5 * init->gamma, init->amp * std::cos(init->phase), init->amp * std::sin(init->phase);
  } else {
    std::size_t tallest = 0;
    for (std::size_t k = 1; k < m; ++k)
      if (std::abs(d.y[k]) > std::abs(d.y[tallest])) tallest = k;
    p << d.f[tallest], s.bin_width(), d.y[tallest].real(), d.y[tallest].imag();
  }
  if (!(p(1) > 0.0)) throw ValidationError("fit_lorentzian: initial width must be > 0");
  // Half widths far below one bin are unresolvable; clamp so noise cannot collapse a line onto one bin.
  const double hw_min = kMinHalfWidthBins * s.bin_width();
  p(1) = std::max(p(1), hw_min);

  double current = cost(d, p);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = current == 0.0;
  Eigen::MatrixXd jac(2 * m, 4);
  Eigen::VectorXd res(2 * m);
  while (!converged && iter < kMaxFitIterations) {
    ++iter;
    const Complex c(p(2), p(3));
    const double hw = p(1);
    for (std::size_t k = 0; k < m; ++k) {
      const Complex den(hw, d.f[k] - p(0));
      const Complex inv = 1.0 / den;
      const Complex model = c * hw * inv;
      const Complex r = model - d.y[k];
      const Complex d_f0 = c * hw * Complex(0.0, 1.0) * inv * inv;
      const Complex d_hw = c * Complex(0.0, d.f[k] - p(0)) * inv * inv;
      const Complex d_cr = hw * inv;
      const Complex d_ci = Complex(0.0, 1.0) * hw * inv;
      const auto row = static_cast<Eigen::Index>(2 * k);
      res(row) = r.real();
      res(row + 1) = r.imag();
      jac.row(row) << d_f0.real(), d_hw.real(), d_cr.real(), d_ci.real();
      jac.row(row + 1) << d_f0.imag(), d_hw.imag(), d_cr.imag(), d_ci.imag();
    }
    Eigen::Matrix4d jtj = jac.transpose() * jac;
    Eigen::Vector4d grad = jac.transpose() * res;
    // Width pinned at its bound and pushed further down: freeze it for this step.
    if (p(1) <= hw_min && grad(1) > 0.0) {
      jtj.row(1).setZero();
      jtj.col(1).setZero();
      jtj(1, 1) = 1.0;
      grad(1) = 0.0;
    }
    bool accepted = false;
    while (!accepted && lambda < 1e16) {
      Eigen::Matrix4d a = jtj;
      for (int i = 0; i < 4; ++i) a(i, i) += lambda * std::max(jtj(i, i), 1e-300);
      const Eigen::Vector4d step = a.ldlt().solve(-grad);
      Params trial = p + step;
      trial(1) = std::max(trial(1), hw_min);
      const double trial_cost = step.allFinite() ? cost(d, trial) : INFINITY;
      if (trial_cost <= current) {
        const double rel_step = (trial - p).cwiseAbs().cwiseQuotient(p.cwiseAbs().cwiseMax(1e-300)).maxCoeff();
        const double decrease = current - trial_cost;
        p = trial;
        current = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (rel_step < 1e-12 || decrease <= 1e-24 * std::max(current, 1e-300) || current == 0.0) converged = true;
      } else {
        lambda *= 10.0;
      }
    }
    // No downhill step at any damping: already at the minimum to working precision.
    if (!accepted) converged = true;
  }
  if (!converged) {
    throw NumericalError("fit_lorentzian: no convergence after " + std::to_string(kMaxFitIterations) +
                         " iterations (residual " + std::to_string(std::sqrt(current / m)) + ")");
  }

  FitResult out;
  out.iterations = iter;
  out.residual = std::sqrt(current / static_cast<double>(m));
  const Complex c(p(2), p(3));
  out.peak.f0 = p(0);
  out.peak.gamma = 2.0 * p(1);
  out.peak.amp = std::abs(c);
  out.peak.phase = out.peak.amp > 0.0 ? wrap_phase(std::arg(c)) : 0.0;

  const std::size_t edge = std::max<std::size_t>(2, m / 10);
  double edge_sq = 0.0;
  for (std::size_t k = 0; k < edge; ++k) edge_sq += std::norm(d.y[k]) + std::norm(d.y[m - 1 - k]);
  const double edge_rms = std::sqrt(edge_sq / (2.0 * static_cast<double>(edge)));
  out.low_confidence = !(out.peak.amp > 10.0 * edge_rms) || p(1) <= hw_min;
  return out;
}

ChannelRatio channel_ratio(const std::vector<LorentzianPeak>& peaks_x, const std::vector<LorentzianPeak>& peaks_y,
                           double tolerance_hz) {
  if (peaks_x.size() != peaks_y.size() || peaks_x.empty()) {
    throw ValidationError("channel_ratio: peak lists must be non-empty and of equal length");
  }
  struct Pair {
    const LorentzianPeak* x;
    const LorentzianPeak* y;
  };
  std::vector<Pair> pairs;
  std::vector<bool> used(peaks_y.size(), false);
  for (const auto& px : peaks_x) {
    std::size_t best = peaks_y.size();
    double best_d = tolerance_hz;
    for (std::size_t j = 0; j < peaks_y.size(); ++j) {
      const double dist = std::abs(peaks_y[j].f0 - px.f0);
      if (!used[j] && dist <= best_d) {
        best = j;
        best_d = dist;
      }
    }
    if (best == peaks_y.size()) {
      throw ValidationError("channel_ratio: no y peak within " + std::to_string(tolerance_hz) + " Hz of x peak at " +
                            std::to_string(px.f0) + " Hz");
    }
    used[best] = true;
    pairs.push_back({&px, &peaks_y[best]});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.y->f0 < b.y->f0; });

  double sum_x = 0.0, sum_y = 0.0;
  ChannelRatio out;
  for (const Pair& pr : pairs) {
    sum_x += pr.x->amp;
    sum_y += pr.y->amp;
    out.phase_offsets.push_back(wrap_phase(pr.x->phase - pr.y->phase));
  }
  if (sum_y == 0.0) throw ValidationError("channel_ratio: y amplitudes sum to zero");
  out.magnitude = sum_x / sum_y;
  if (pairs.front().x->amp == 0.0) {
    out.sign = 0;
  } else {
    out.sign = std::cos(out.phase_offsets.front()) >= 0.0 ? 1 : -1;
  }
  return out;
}

Spectrum field_reversal_subtract(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size() || a.n_padded != b.n_padded || std::abs(a.dt - b.dt) > 1e-15 * a.dt) {
    throw ValidationError("field_reversal_subtract: spectra have different frequency axes");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.freq_hz[k] - b.freq_hz[k]) > 1e-12 * std::max(1.0, std::abs(a.freq_hz[k]))) {
      throw ValidationError("field_reversal_subtract: frequency axes differ at bin " + std::to_string(k));
    }
  }
  Spectrum out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out.value[k] = 0.5 * (a.value[k] - b.value[k]);
  return out;
}

namespace {

void require_same_acquisition(const TimeSeries& a, const TimeSeries& b, const char* what) {
  if (a.size() != b.size() || a.dt != b.dt || a.spins.gamma1 != b.spins.gamma1 || a.spins.gamma2 != b.spins.gamma2) {
    throw ValidationError(std::string(what) + ": series differ in acquisition parameters");
  }
}

}  // namespace

TimeSeries average_series(const TimeSeries& a, const TimeSeries& b) {
  require_same_acquisition(a, b, "average_series");
  TimeSeries out = a;
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.samples[k].mx = 0.5 * (a.samples[k].mx + b.samples[k].mx);
    out.samples[k].my = 0.5 * (a.samples[k].my + b.samples[k].my);
    out.samples[k].mz = 0.5 * (a.samples[k].mz + b.samples[k].mz);
  }
  return out;
}

EnantiomerComparison compare_enantiomers(const TimeSeries& plus, const TimeSeries& minus, const PeakSearch& search) {
  require_same_acquisition(plus, minus, "compare_enantiomers");
  EnantiomerComparison r;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t k = 0; k < plus.size(); ++k) {
    const Sample& a = plus.samples[k];
    const Sample& b = minus.samples[k];
    saa += a.mx * a.mx;
    sbb += b.mx * b.mx;
    sab += a.mx * b.mx;
    r.max_abs_x_sum = std::max(r.max_abs_x_sum, std::abs(a.mx + b.mx));
    r.max_abs_x = std::max({r.max_abs_x, std::abs(a.mx), std::abs(b.mx)});
    r.max_abs_y = std::max({r.max_abs_y, std::abs(a.my), std::abs(b.my)});
    r.y_max_difference = std::max(r.y_max_difference, std::abs(a.my - b.my));
  }
  r.x_correlation = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;

  if (!search.centers_hz.empty()) {
    const Spectrum sp = transform(apodize(plus, search.t2eff), Axis::x);
    const Spectrum sm = transform(apodize(minus, search.t2eff), Axis::x);
    for (double c : search.centers_hz) {
      const FitWindow w{std::max(0.0, c - search.half_width_hz), c + search.half_width_hz};
      const FitResult fp = fit_lorentzian(sp, w);
      const FitResult fm = fit_lorentzian(sm, w);
      PeakPhaseDifference pd;
      pd.f0 = fp.peak.f0;
      pd.phase_plus = fp.peak.phase;
      pd.phase_minus = fm.peak.phase;
      pd.difference = wrap_phase(fp.peak.phase - fm.peak.phase);
      pd.amp_plus = fp.peak.amp;
      pd.amp_minus = fm.peak.amp;
      r.peaks.push_back(pd);
    }
  }
  return r;
}

}  // namespace zfchiral
