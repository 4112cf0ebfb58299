#include "zfchiral/qmatrix.hpp"

#include <cmath>
#include <string>

#include "zfchiral/errors.hpp"

namespace zfchiral {

CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double hermiticity_defect(const CMatrix& m) {
  require_square(m, "hermiticity_defect");
  return max_abs(m - m.adjoint());
}

void require_hermitian(const CMatrix& m, const char* what) {
  require_square(m, what);
  const double defect = max_abs(m - m.adjoint());
  if (!(defect <= kHermitianTol)) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian (max |M - M^dagger| = " +
                          std::to_string(defect) + ")");
  }
}

EigenSystem herm_eigendecompose(const CMatrix& m) {
  require_hermitian(m, "herm_eigendecompose");
  // Symmetrize so the solver sees an exactly self-adjoint input.
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eigendecompose: eigensolver failed to converge");
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < es.vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < es.vectors.rows(); ++r) {
      const double a = std::abs(es.vectors(r, c));
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = r;
      }
    }
    const Complex pivot = es.vectors(best, c);
    if (best_abs > 0.0) es.vectors.col(c) *= std::conj(pivot) / best_abs;
    es.vectors(best, c) = Complex(best_abs, 0.0);
  }
  return es;
}

CMatrix reconstruct(const EigenSystem& es) {
  return es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

CMatrix unitary_propagator(const EigenSystem& h_eig, double dt) {
  if (!std::isfinite(dt)) throw ValidationError("unitary_propagator: dt must be finite");
  const auto dim = h_eig.vectors.rows();
  if (dt == 0.0) return identity(dim);
  CVector phases(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double angle = -h_eig.values(i) * dt;
    phases(i) = Complex(std::cos(angle), std::sin(angle));
  }
  return h_eig.vectors * phases.asDiagonal() * h_eig.vectors.adjoint();
}

CMatrix unitary_propagator(const CMatrix& h, double dt) {
  if (!std::isfinite(dt)) throw ValidationError("unitary_propagator: dt must be finite");
  if (dt == 0.0) {
    require_hermitian(h, "unitary_propagator");
    return identity(h.rows());
  }
  return unitary_propagator(herm_eigendecompose(h), dt);
}

Complex trace_expectation(const CMatrix& a, const CMatrix& rho) {
  require_square(a, "trace_expectation");
  require_square(rho, "trace_expectation");
  if (a.rows() != rho.rows()) {
    throw ValidationError("trace_expectation: dimension mismatch (" + std::to_string(a.rows()) +
                          " vs " + std::to_string(rho.rows()) + ")");
  }
  // Tr{A^dagger rho} = sum_ij conj(A_ij) rho_ij
  return (a.conjugate().cwiseProduct(rho)).sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace zfchiral
