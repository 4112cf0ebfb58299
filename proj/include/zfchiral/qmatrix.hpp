#pragma once

// Small dense complex linear algebra for spin operators, Hamiltonians and
// density matrices. Matrices are Eigen dynamic complex matrices; every
// operation here checks squareness and (where required) Hermiticity.

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace zfchiral {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Absolute tolerance on max |M - M^dagger| accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-12;

struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // orthonormal columns
};

CMatrix identity(Eigen::Index dim);
CMatrix dagger(const CMatrix& m);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Largest entry modulus of m.
double max_abs(const CMatrix& m);

/// Largest entry modulus of m - m^dagger. Throws on non-square input.
double hermiticity_defect(const CMatrix& m);

void require_square(const CMatrix& m, const char* what);
void require_hermitian(const CMatrix& m, const char* what);

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; each
/// eigenvector is rotated so its largest-magnitude component is real and
/// positive (first such component on ties).
EigenSystem herm_eigendecompose(const CMatrix& m);

/// exp(-i H dt) built from the eigensystem of H (H in rad/s, dt in s).
/// dt == 0 returns the identity exactly.
CMatrix unitary_propagator(const CMatrix& h, double dt);
CMatrix unitary_propagator(const EigenSystem& h_eig, double dt);

/// Tr{A^dagger rho}.
Complex trace_expectation(const CMatrix& a, const CMatrix& rho);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// V diag(values) V^dagger.
CMatrix reconstruct(const EigenSystem& es);

}  // namespace zfchiral
