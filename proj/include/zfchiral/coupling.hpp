#pragma once

// Coupling tensors in the molecular frame and their orientational averages.
//
// The molecular z axis points along the electric dipole. Under weak uniaxial
// orientation by an electric field only the q-th rank, k' = 0 components
// survive rotation about the director; rank 1 scales linearly with the order
// parameter s = mu E_loc / (3 k T) and rank 2 quadratically.
//
// Convention: the rank-1 zero component is identified with J_xy directly
// (standard spherical tensors would carry an extra factor -i sqrt 2); all
// numbers downstream are quoted in this convention.

#include <array>

#include <Eigen/Dense>

namespace zfchiral {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;     // J/K
inline constexpr double mu0_over_4pi = 1e-7;          // T m / A
inline constexpr double debye = 3.33564e-30;          // C m
inline constexpr double gamma_1h = 42.576;            // MHz/T
inline constexpr double gamma_13c = 10.705;           // MHz/T
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// Cartesian coupling tensor in Hz, H = I1 . J . I2.
struct CartesianJ {
  Matrix3 m = Matrix3::Zero();
};

struct IrreducibleJ {
  double j0 = 0.0;               // Tr(J)/3
  Vector3 j1 = Vector3::Zero();  // (J_yz, J_zx, J_xy) of the antisymmetric part
  Matrix3 j2 = Matrix3::Zero();  // symmetric traceless part
};

struct OrientationConditions {
  double mu_debye = 2.5;
  double e_applied = 5e5;     // V/m
  double eps_r = 30.0;
  double temperature = 298.0;  // K
  double bond_length = 1.092e-10;  // m
  double gamma1 = constants::gamma_13c;  // MHz/T
  double gamma2 = constants::gamma_1h;   // MHz/T

  void validate() const;
};

/// Effective zero-field couplings (Hz) feeding the simulation Hamiltonian.
struct ZFParams {
  double j0 = 100.0;
  double j1bar = 1.0;
  double dbar = 0.7;
};

IrreducibleJ decompose(const CartesianJ& j);
CartesianJ recompose(const IrreducibleJ& d);

/// Mirror image through the xz plane (the plane containing the dipole):
/// M J M with M = diag(1,-1,1).
CartesianJ reflect_enantiomer(const CartesianJ& j);

/// Rank-1 zero component, equal to J_xy by convention.
double rank1_zero_component(const IrreducibleJ& d);

/// Wigner small-d element d^(q)_{m',m}(beta), any non-negative integer rank.
double wigner_small_d(int rank, int mprime, int m, double beta);

/// (2q+1)x(2q+1) small-d matrix, rows/cols ordered m = q, q-1, ..., -q.
Eigen::MatrixXd wigner_small_d_matrix(int rank, double beta);

/// s = mu E_loc / (3 k T) with Lorentz local field E_loc = (eps_r + 2)/3 E.
double order_parameter(const OrientationConditions& c);

/// Field E_applied giving order parameter s_target. Inverse of order_parameter.
double required_field(double s_target, double mu_debye, double eps_r, double temperature);

/// Averaged antisymmetric coupling s * J_xy.
double average_rank1(double j1_0, double s);

/// Dipolar coupling constant (mu0/4pi) gamma1 gamma2 hbar / (2 pi r^3), Hz.
double dipolar_constant(const OrientationConditions& c);

/// -(1/30) (mu E / k T)^2 D = -(1/30) (3 s)^2 D, Hz (signed).
double residual_dipolar(const OrientationConditions& c, double s);

/// Report comparing the quoted field for a target order parameter with the
/// value implied by the order-parameter formula.
struct OrientationReport {
  OrientationConditions conditions;
  double s_at_applied = 0.0;         // order_parameter(conditions)
  double s_target = 0.01;
  double field_for_target = 0.0;     // V/m, from required_field
  double quoted_field = 5e5;         // V/m (5 kV/cm)
  double s_at_quoted_field = 0.0;
  double discrepancy_factor = 0.0;   // field_for_target / quoted_field
  double dipolar_constant_hz = 0.0;
  double residual_dipolar_hz = 0.0;  // at s_target
};

OrientationReport orientation_report(const OrientationConditions& c, double s_target = 0.01,
                                     double quoted_field = 5e5);

}  // namespace zfchiral
