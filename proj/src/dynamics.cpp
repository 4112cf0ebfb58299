#include "zfchiral/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zfchiral/errors.hpp"

namespace zfchiral {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;
// Unit-spin-order states carry this much polarization so the full matrix
// stays positive. The deviation itself is normalized by gamma_ref.
constexpr double kUnitPolarization = 1e-3;

double gamma_ref(const SpinPair& sp) { return std::max(std::abs(sp.gamma1), std::abs(sp.gamma2)); }

}  // namespace

void SpinPair::validate() const {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2) || gamma1 == 0.0 || gamma2 == 0.0) {
    throw ValidationError("spin_system: gyromagnetic ratios must be finite and nonzero");
  }
  if (gamma1 == gamma2) {
    throw ValidationError("spin_system: gyromagnetic ratios must differ (unlike spins required)");
  }
}

CMatrix DensityMatrix::matrix() const { return 0.25 * identity(4) + scale * deviation; }

double DensityMatrix::observable_factor() const {
  return convention == ScaleConvention::absolute ? scale : 1.0;
}

void DensityMatrix::validate() const {
  const CMatrix rho = matrix();
  require_hermitian(rho, "DensityMatrix");
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-12) {
    throw NumericalError("DensityMatrix: trace deviates from 1 by " + std::to_string(std::abs(tr - 1.0)));
  }
  const EigenSystem es = herm_eigendecompose(rho);
  if (es.values.minCoeff() < -1e-12) {
    throw NumericalError("DensityMatrix: negative eigenvalue " + std::to_string(es.values.minCoeff()));
  }
}

CMatrix build_hamiltonian(const ZFParams& p, double kappa) {
  const auto& s = spin_operator_set();
  const Complex i{0.0, 1.0};
  const CMatrix dipolar = -2.0 * s.spin1.z * s.spin2.z + 0.5 * flip_flop_sum();
  CMatrix h = kTwoPi * p.j0 * scalar_product() + kTwoPi * i * p.j1bar * kappa * flip_flop_difference() +
              kTwoPi * p.dbar * dipolar;
  return h;
}

CMatrix magnetization(const SpinPair& sp, Axis a) {
  const auto& s = spin_operator_set();
  return sp.gamma1 * s.spin1.along(a) + sp.gamma2 * s.spin2.along(a);
}

DensityMatrix thermal_state(const SpinPair& sp, double bp, double temperature, Axis axis, ThermalOptions opts) {
  sp.validate();
  if (!(temperature > 0.0)) throw ValidationError("thermal_state: temperature must be > 0");
  if (!std::isfinite(bp)) throw ValidationError("thermal_state: field must be finite");
  const double gamma_max = std::max(std::abs(sp.gamma1), std::abs(sp.gamma2)) * kTwoPi * 1e6;
  const double zeeman_ratio = std::abs(bp) * constants::hbar * gamma_max / (constants::boltzmann * temperature);
  if (zeeman_ratio > 0.01) {
    throw ValidationError("thermal_state: high-temperature approximation violated (B hbar gamma / kT = " +
                          std::to_string(zeeman_ratio) + " > 0.01)");
  }
  DensityMatrix rho;
  rho.convention = opts.convention;
  if (bp == 0.0) {
    rho.scale = 0.0;
    return rho;
  }
  if (opts.convention == ScaleConvention::absolute) {
    rho.deviation = magnetization(sp, axis);
    rho.scale = bp * constants::hbar * kTwoPi * 1e6 / (4.0 * constants::boltzmann * temperature);
  } else {
    rho.deviation = ((bp > 0.0 ? 1.0 : -1.0) / gamma_ref(sp)) * magnetization(sp, axis);
    rho.scale = kUnitPolarization;
  }
  return rho;
}

DensityMatrix apply_pulse(const DensityMatrix& rho, Axis axis, double theta1, double theta2) {
  const CMatrix r = rotation_about_axis(axis, theta1, theta2);
  DensityMatrix out = rho;
  out.deviation = r * rho.deviation * r.adjoint();
  return out;
}

DensityMatrix ideal_inverted_state(const SpinPair& sp) {
  sp.validate();
  const auto& s = spin_operator_set();
  DensityMatrix rho;
  rho.deviation = (-sp.gamma1 * s.spin1.y + sp.gamma2 * s.spin2.y) / gamma_ref(sp);
  rho.scale = kUnitPolarization;
  return rho;
}

std::vector<double> TimeSeries::channel(Axis a) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) {
    out.push_back(a == Axis::x ? s.mx : a == Axis::y ? s.my : s.mz);
  }
  return out;
}

namespace {

// The fixed step U = V diag(p) V^dagger acts in the eigenframe as
// rho_ab -> p_a conj(p_b) rho_ab. Stepping there keeps populations exact and
// makes enantiomer runs (H and conj(H), identical spectra) share bitwise
// identical phase factors.
struct EigenframeStepper {
  CMatrix vectors;
  CMatrix phase;  // p_a conj(p_b), unit diagonal

  EigenframeStepper(const CMatrix& h, double dt) {
    const EigenSystem es = herm_eigendecompose(h);
    vectors = es.vectors;
    const auto dim = h.rows();
    CVector p(dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      const double angle = -es.values(a) * dt;
      p(a) = Complex(std::cos(angle), std::sin(angle));
    }
    phase = p * p.adjoint();
    for (Eigen::Index a = 0; a < dim; ++a) phase(a, a) = Complex(1.0, 0.0);
  }

  CMatrix to_frame(const CMatrix& m) const { return vectors.adjoint() * m * vectors; }
  CMatrix from_frame(const CMatrix& m) const { return vectors * m * vectors.adjoint(); }
  void step(CMatrix& m) const { m = m.cwiseProduct(phase); }
};

}  // namespace

TimeSeries propagate(const DensityMatrix& rho0, const CMatrix& h, double dt, std::size_t n, const SpinPair& sp) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("propagate: dt must be > 0");
  if (n < 1) throw ValidationError("propagate: need at least one sample");
  require_hermitian(h, "propagate");
  const EigenframeStepper stepper(h, dt);
  const CMatrix mx = stepper.to_frame(magnetization(sp, Axis::x));
  const CMatrix my = stepper.to_frame(magnetization(sp, Axis::y));
  const CMatrix mz = stepper.to_frame(magnetization(sp, Axis::z));
  const double factor = rho0.observable_factor();

  TimeSeries ts;
  ts.dt = dt;
  ts.spins = sp;
  ts.samples.reserve(n);
  CMatrix dev = stepper.to_frame(rho0.deviation);
  const Complex trace0 = dev.trace();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) stepper.step(dev);
    Sample s{factor * trace_expectation(mx, dev).real(), factor * trace_expectation(my, dev).real(),
             factor * trace_expectation(mz, dev).real()};
    if (!std::isfinite(s.mx) || !std::isfinite(s.my) || !std::isfinite(s.mz)) {
      throw NumericalError("propagate: non-finite observable at step " + std::to_string(k));
    }
    ts.samples.push_back(s);
  }
  const double trace_drift = std::abs(rho0.scale * (dev.trace() - trace0));
  if (trace_drift > 1e-12) {
    throw NumericalError("propagate: trace drift " + std::to_string(trace_drift) + " exceeds 1e-12");
  }
  return ts;
}

DensityMatrix evolve(const DensityMatrix& rho0, const CMatrix& h, double dt, std::size_t steps) {
  require_hermitian(h, "evolve");
  const EigenframeStepper stepper(h, dt);
  CMatrix dev = stepper.to_frame(rho0.deviation);
  for (std::size_t k = 0; k < steps; ++k) stepper.step(dev);
  DensityMatrix rho = rho0;
  rho.deviation = stepper.from_frame(dev);
  return rho;
}

LabelledLevels labelled_levels(const CMatrix& h) {
  const EigenSystem es = herm_eigendecompose(h);
  if (es.values.size() != 4) throw ValidationError("labelled_levels: expected a 4x4 two-spin Hamiltonian");
  const double r2 = 1.0 / std::sqrt(2.0);
  CVector singlet = CVector::Zero(4), zero = CVector::Zero(4);
  singlet(1) = -r2;
  singlet(2) = r2;
  zero(1) = r2;
  zero(2) = r2;
  LabelledLevels out;
  out.energies_hz = es.values / kTwoPi;
  for (Eigen::Index c = 0; c < 4; ++c) {
    const CVector v = es.vectors.col(c);
    const double w_s = std::norm(singlet.dot(v));
    const double w_0 = std::norm(zero.dot(v));
    const double w_pm = std::norm(v(0)) + std::norm(v(3));
    if (w_s >= w_0 && w_s >= w_pm) {
      out.labels.emplace_back("alpha");
    } else if (w_0 >= w_pm) {
      out.labels.emplace_back("beta");
    } else {
      out.labels.emplace_back("+-1");
    }
  }
  return out;
}

std::vector<Transition> transition_frequencies(const CMatrix& h) {
  const LabelledLevels lv = labelled_levels(h);
  std::vector<Transition> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      out.push_back({lv.energies_hz(b) - lv.energies_hz(a), lv.labels[a] + "<->" + lv.labels[b], a, b});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Transition& x, const Transition& y) { return x.frequency_hz < y.frequency_hz; });
  return out;
}

}  // namespace zfchiral
