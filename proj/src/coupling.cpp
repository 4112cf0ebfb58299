#include "zfchiral/coupling.hpp"

#include <cmath>
#include <string>

#include "zfchiral/errors.hpp"

namespace zfchiral {

void OrientationConditions::validate() const {
  if (!(temperature > 0.0)) throw ValidationError("orientation.temperature must be > 0");
  if (!(eps_r >= 1.0)) throw ValidationError("orientation.eps_r must be >= 1");
  if (!(mu_debye >= 0.0)) throw ValidationError("orientation.mu must be >= 0");
  if (!(bond_length > 0.0)) throw ValidationError("orientation.bond_length must be > 0");
  if (!std::isfinite(e_applied)) throw ValidationError("orientation.e_applied must be finite");
}

IrreducibleJ decompose(const CartesianJ& j) {
  IrreducibleJ d;
  const Matrix3& m = j.m;
  d.j0 = m.trace() / 3.0;
  const Matrix3 anti = 0.5 * (m - m.transpose());
  d.j1 = Vector3(anti(1, 2), anti(2, 0), anti(0, 1));
  d.j2 = 0.5 * (m + m.transpose()) - d.j0 * Matrix3::Identity();
  return d;
}

CartesianJ recompose(const IrreducibleJ& d) {
  Matrix3 anti;
  const double yz = d.j1(0), zx = d.j1(1), xy = d.j1(2);
  anti << 0.0, xy, -zx,
          -xy, 0.0, yz,
          zx, -yz, 0.0;
  return {d.j0 * Matrix3::Identity() + anti + d.j2};
}

CartesianJ reflect_enantiomer(const CartesianJ& j) {
  const Matrix3 mirror = Vector3(1.0, -1.0, 1.0).asDiagonal();
  return {mirror * j.m * mirror};
}

double rank1_zero_component(const IrreducibleJ& d) { return d.j1(2); }

double wigner_small_d(int rank, int mprime, int m, double beta) {
  if (rank < 0 || std::abs(mprime) > rank || std::abs(m) > rank) {
    throw ValidationError("wigner_small_d: invalid indices (q=" + std::to_string(rank) +
                          ", m'=" + std::to_string(mprime) + ", m=" + std::to_string(m) + ")");
  }
  // Wigner's formula:
  // d = sum_s (-1)^(m'-m+s) sqrt[(j+m')!(j-m')!(j+m)!(j-m)!]
  //     / [(j+m-s)! s! (m'-m+s)! (j-m'-s)!] cos(b/2)^(2j+m-m'-2s) sin(b/2)^(m'-m+2s)
  auto lf = [](int n) { return std::lgamma(n + 1.0); };
  const double c = std::cos(0.5 * beta), s_half = std::sin(0.5 * beta);
  const double log_norm = 0.5 * (lf(rank + mprime) + lf(rank - mprime) + lf(rank + m) + lf(rank - m));
  const int s_min = std::max(0, m - mprime);
  const int s_max = std::min(rank + m, rank - mprime);
  double sum = 0.0;
  for (int s = s_min; s <= s_max; ++s) {
    const double mag = std::exp(log_norm - lf(rank + m - s) - lf(s) - lf(mprime - m + s) - lf(rank - mprime - s));
    const double term = mag * std::pow(c, 2 * rank + m - mprime - 2 * s) * std::pow(s_half, mprime - m + 2 * s);
    sum += ((mprime - m + s) % 2 == 0) ? term : -term;
  }
  return sum;
}

Eigen::MatrixXd wigner_small_d_matrix(int rank, double beta) {
  const int dim = 2 * rank + 1;
  Eigen::MatrixXd d(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) d(r, c) = wigner_small_d(rank, rank - r, rank - c, beta);
  return d;
}

double order_parameter(const OrientationConditions& c) {
  c.validate();
  const double local_field = (c.eps_r + 2.0) / 3.0 * c.e_applied;
  return c.mu_debye * constants::debye * local_field / (3.0 * constants::boltzmann * c.temperature);
}

double required_field(double s_target, double mu_debye, double eps_r, double temperature) {
  if (!(s_target > 0.0)) throw ValidationError("required_field: target order parameter must be > 0");
  if (mu_debye == 0.0) throw ValidationError("required_field: molecule has no electric dipole (mu = 0)");
  if (!(temperature > 0.0)) throw ValidationError("required_field: temperature must be > 0");
  if (!(eps_r >= 1.0)) throw ValidationError("required_field: eps_r must be >= 1");
  const double local_field = 3.0 * constants::boltzmann * temperature * s_target / (mu_debye * constants::debye);
  return local_field * 3.0 / (eps_r + 2.0);
}

double average_rank1(double j1_0, double s) {
  if (!(std::abs(s) <= 1.0)) throw ValidationError("average_rank1: |s| must be <= 1");
  return s * j1_0;
}

double dipolar_constant(const OrientationConditions& c) {
  if (!(c.bond_length > 0.0)) throw ValidationError("dipolar_constant: bond length must be > 0");
  const double two_pi = 2.0 * constants::pi;
  const double g1 = two_pi * c.gamma1 * 1e6;  // rad/s/T
  const double g2 = two_pi * c.gamma2 * 1e6;
  return constants::mu0_over_4pi * g1 * g2 * constants::hbar / (two_pi * std::pow(c.bond_length, 3));
}

double residual_dipolar(const OrientationConditions& c, double s) {
  const double mu_e_over_kt = 3.0 * s;
  return -(1.0 / 30.0) * mu_e_over_kt * mu_e_over_kt * dipolar_constant(c);
}

OrientationReport orientation_report(const OrientationConditions& c, double s_target, double quoted_field) {
  OrientationReport r;
  r.conditions = c;
  r.s_at_applied = order_parameter(c);
  r.s_target = s_target;
  r.quoted_field = quoted_field;
  r.field_for_target = required_field(s_target, c.mu_debye, c.eps_r, c.temperature);
  OrientationConditions at_quoted = c;
  at_quoted.e_applied = quoted_field;
  r.s_at_quoted_field = order_parameter(at_quoted);
  r.discrepancy_factor = r.field_for_target / quoted_field;
  r.dipolar_constant_hz = dipolar_constant(c);
  r.residual_dipolar_hz = residual_dipolar(c, s_target);
  return r;
}

}  // namespace zfchiral
