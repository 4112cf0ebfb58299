#pragma once

// Two-spin-1/2 operator algebra.
//
// Basis order is the one of the explicit product-operator matrices used
// throughout: index 0..3 with I1z = diag(+,-,+,-)/2 and I2z = diag(+,+,-,-)/2,
// i.e. spin 1 is the fast index.
//
// Bilinear tensor operators T(q,k) = sum C(1 k1 1 k2 | q k) I1_(k1) I2_(k2)
// are built from Condon-Shortley spherical components
//   I_(+-1) = -+ (Ix +- i Iy)/sqrt(2),  I_(0) = Iz.
// With this convention
//   T(0,0) = -(1/sqrt 3) I1.I2
//   T(1,0) = -(1/(2 sqrt 2)) (I1+ I2- - I1- I2+)
// so the antisymmetric Hamiltonian term 2 pi i J (I1+ I2- - I1- I2+) equals
// -2 sqrt(2) i * 2 pi J T(1,0).

#include <array>

#include "zfchiral/qmatrix.hpp"

namespace zfchiral {

enum class Axis { x, y, z };

Axis parse_axis(char c);
char axis_name(Axis a);

struct SpinOperators {
  CMatrix x, y, z, plus, minus;
  const CMatrix& along(Axis a) const;
};

struct SpinOperatorSet {
  SpinOperators spin1, spin2;
  CMatrix fx, fy, fz;  // total angular momentum components
  const SpinOperators& spin(int index) const;  // index 1 or 2
};

/// Shared immutable instance.
const SpinOperatorSet& spin_operator_set();

/// Sign convention of single-spin spherical components.
enum class SphericalConvention {
  condon_shortley,  // I_(+-1) = -+ I+-/sqrt 2
  additive,         // I_(+-1) = I+-/2, so I_(+1) + I_(-1) = Ix exactly
};

/// Rank-1 spherical component I_(k) of spin i (1 or 2), k in {-1,0,1}.
CMatrix spherical_single(int spin, int k,
                         SphericalConvention conv = SphericalConvention::condon_shortley);

/// <j1 m1; j2 m2 | J M>, Condon-Shortley phase, via Racah's sum. Arguments are
/// ordinary (possibly half-integer) values; throws on malformed quantum numbers.
double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m);

struct TensorOperator {
  int rank;
  int component;
  CMatrix matrix;
};

TensorOperator bilinear_tensor_op(int rank, int component);

/// exp(-i theta1 I1a) exp(-i theta2 I2a).
CMatrix rotation_about_axis(Axis axis, double theta1, double theta2);

/// Scalar product I1.I2 and the flip-flop / antisymmetric combinations.
CMatrix scalar_product();
CMatrix flip_flop_sum();        // I1+ I2- + I1- I2+
CMatrix flip_flop_difference();  // I1+ I2- - I1- I2+

}  // namespace zfchiral
