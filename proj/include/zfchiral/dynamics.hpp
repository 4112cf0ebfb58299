#pragma once

// Zero-field two-spin Hamiltonian, initial states, and discrete-time
// density-matrix propagation.

#include <string>
#include <vector>

#include "zfchiral/coupling.hpp"
#include "zfchiral/qmatrix.hpp"
#include "zfchiral/spinops.hpp"

namespace zfchiral {

struct SpinPair {
  double gamma1 = constants::gamma_13c;  // MHz/T
  double gamma2 = constants::gamma_1h;   // MHz/T
  std::string label1 = "13C";
  std::string label2 = "1H";

  void validate() const;
};

/// Normalization of the antisymmetric term. 1 reproduces the Hamiltonian
/// 2 pi i J1 (I1+ I2- - I1- I2+) verbatim; 1/2 matches the first-order
/// mixing coefficient J1/(2 J0) quoted for the perturbed eigenstates.
/// Simulating both against the published amplitude ratio selects 1.
inline constexpr double kDefaultKappa = 1.0;

enum class ScaleConvention {
  unit_spin_order,  // observables reported per unit polarization prefactor
  absolute,         // Boltzmann prefactor Bp hbar / (4 k T) retained
};

/// rho = 1/4 + scale * deviation, deviation traceless and Hermitian.
///
/// Unit spin order: deviation = (gamma . I) / gamma_ref with gamma_ref the
/// larger |gamma|, and observables are Tr{M deviation}, so signals are
/// O(gamma). Absolute: deviation = gamma . I, scale = Bp hbar / 4kT, and
/// observables are Tr{M rho}.
struct DensityMatrix {
  CMatrix deviation = CMatrix::Zero(4, 4);
  double scale = 0.0;
  ScaleConvention convention = ScaleConvention::unit_spin_order;

  CMatrix matrix() const;
  /// Multiplier turning Tr{M deviation} into the reported observable.
  double observable_factor() const;
  void validate() const;
};

struct ThermalOptions {
  ScaleConvention convention = ScaleConvention::unit_spin_order;
};

/// H / hbar in rad/s for the averaged couplings.
CMatrix build_hamiltonian(const ZFParams& p, double kappa = kDefaultKappa);

/// High-temperature thermal state after prepolarization in field bp (T)
/// along `axis`. Throws ValidationError when bp hbar gamma / kT > 0.01.
DensityMatrix thermal_state(const SpinPair& sp, double bp, double temperature, Axis axis,
                            ThermalOptions opts = {});

/// R rho R^dagger with R = rotation_about_axis(axis, theta1, theta2).
DensityMatrix apply_pulse(const DensityMatrix& rho, Axis axis, double theta1, double theta2);

/// Deviation (-gamma1 I1y + gamma2 I2y) / gamma_ref: y prepolarization followed by a
/// perfect inversion of spin 1.
DensityMatrix ideal_inverted_state(const SpinPair& sp);

struct Sample {
  double mx = 0.0, my = 0.0, mz = 0.0;
};

struct TimeSeries {
  double dt = 0.0;
  std::vector<Sample> samples;
  ZFParams params;
  SpinPair spins;
  double kappa = kDefaultKappa;
  std::string pulse = "none";
  double t2eff = 0.0;  // 0: not apodized

  std::size_t size() const { return samples.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  std::vector<double> channel(Axis a) const;
};

/// Magnetization operator gamma1 I1a + gamma2 I2a.
CMatrix magnetization(const SpinPair& sp, Axis a);

/// Stepwise propagation rho(t+dt) = U rho(t) U^dagger, U = exp(-i H dt),
/// carried out in the eigenframe of H where U is diagonal. Records <Mx>,
/// <My>, <Mz> at t = 0, dt, ..., (n-1) dt.
TimeSeries propagate(const DensityMatrix& rho0, const CMatrix& h, double dt, std::size_t n,
                     const SpinPair& sp);

/// Full density matrix after `steps` steps, for audits.
DensityMatrix evolve(const DensityMatrix& rho0, const CMatrix& h, double dt, std::size_t steps);

struct Transition {
  double frequency_hz = 0.0;
  std::string label;
  int lower = 0, upper = 0;  // eigenvalue indices
};

struct LabelledLevels {
  Eigen::VectorXd energies_hz;
  std::vector<std::string> labels;  // "alpha" (singlet-like), "beta" (|0>-like), "+-1"
};

LabelledLevels labelled_levels(const CMatrix& h);

/// All pairwise level spacings, sorted ascending, labelled by overlap with
/// the singlet/triplet basis.
std::vector<Transition> transition_frequencies(const CMatrix& h);

}  // namespace zfchiral
