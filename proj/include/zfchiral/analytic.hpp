#pragma once

// First-order perturbative model of the oriented two-spin system.
//
// Under a weak antisymmetric coupling the singlet |S> and triplet |0> mix:
//   |alpha> = (|S> + c |0>)/N,  |beta> = (|0> + c |S>)/N,  c = -i s J1/J0,
// with s = mixing_scale (1/2 in the reference eigenstates). |+-1> are
// untouched. Signals follow from sum_nm V_nm rho_mn exp(-i (E_n - E_m) t).
//
// Normalization notes, all checked against brute-force matrix algebra:
//  * The closed-form transition elements and coherence amplitudes
//    are linear in the mixing magnitude; they equal the brute-force elements
//    of the states above when c = -i J1/J0 (mixing_scale = 1), scaled by 2
//    (Pauli-matrix normalization). CoherenceTable stores spin-1/2 (trace)
//    normalized values; pauli_normalized() restores the factor 2.
//  * The reference <M_y> transition element V'_{-1,alpha} carries the wrong
//    overall sign; the table uses the value that matches the matrix element.
//  * mx_signal/my_signal evaluate the closed forms. Relative to the
//    trace-normalized propagation of build_hamiltonian(kappa = 1) they are
//    larger by 2, and mx_signal has the opposite sign: the closed-form
//    states are eigenstates of the antisymmetric term with reversed sign.

#include <complex>

#include "zfchiral/dynamics.hpp"
#include "zfchiral/qmatrix.hpp"

namespace zfchiral {

/// Ratio between closed-form amplitudes and Tr{M rho} amplitudes.
inline constexpr double kPauliToTraceScale = 0.5;
/// Sign of mx_signal relative to propagation under build_hamiltonian(+kappa).
inline constexpr double kMxSignRelativeToSimulation = -1.0;

struct PerturbationOptions {
  double mixing_scale = 0.5;         // c = -i mixing_scale J1/J0
  bool second_order_shifts = false;  // add -+|V|^2/gap to alpha/beta energies
};

struct PerturbedEigensystem {
  double j0 = 0.0, j1bar = 0.0, dbar = 0.0;
  Complex mixing;  // c
  double norm = 1.0;  // N
  double energy_alpha = 0.0, energy_beta = 0.0, energy_pm1 = 0.0;  // Hz
  CVector singlet, zero, plus1, minus1;  // unperturbed basis
  CVector alpha, beta;
  bool beyond_perturbative = false;  // |J1/J0| > 0.1

  double omega_alpha() const;  // 2 pi (E_alpha - E_pm1), rad/s
  double omega_beta() const;
  /// <basis|state> overlaps, rows (S, 0, +1, -1), columns (alpha, beta).
  Eigen::Matrix<Complex, 4, 2> overlaps() const;
};

PerturbedEigensystem perturbed_states(double j0, double j1bar, double dbar = 0.0,
                                      PerturbationOptions opts = {});

enum class Observable { mx, my };

struct CoherenceEntry {
  Complex v_alpha, v_beta;      // <+-1| M |alpha>, <+-1| M |beta>
  Complex rho_alpha, rho_beta;  // <+-1| rho |alpha>, <+-1| rho |beta>
};

struct CoherenceTable {
  // index 0: |+1>, index 1: |-1>
  CoherenceEntry mx[2];
  CoherenceEntry my[2];

  const CoherenceEntry& entry(Observable o, int pm) const;
  CoherenceTable pauli_normalized() const;
};

/// Closed-form elements for rho(0) deviation -gamma1 I1y + gamma2 I2y.
CoherenceTable coherence_table(const SpinPair& sp, const PerturbedEigensystem& sys);

/// sum over coherences of the table, trace normalization.
double coherence_signal(const CoherenceTable& table, const PerturbedEigensystem& sys, Observable o, double t);

/// (4 gamma1 gamma2 J1/(N^2 J0)) [cos(w_alpha t) - cos(w_beta t)]
double mx_signal(double t, const SpinPair& sp, const PerturbedEigensystem& sys);

/// -((gamma1^2 - gamma2^2)(1 + (J1/J0)^2)/N^2) [cos(w_alpha t) + cos(w_beta t)]
double my_signal(double t, const SpinPair& sp, const PerturbedEigensystem& sys);

struct SignedRatio {
  double magnitude = 0.0;
  int sign = 0;  // -1, 0, +1
  double value() const { return sign * magnitude; }
};

/// 4 gamma1 gamma2 r / ((gamma1^2 - gamma2^2)(1 + r^2)), r = J1/J0.
SignedRatio amplitude_ratio(const SpinPair& sp, double r);

}  // namespace zfchiral
