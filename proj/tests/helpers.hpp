#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "zfchiral/qmatrix.hpp"

namespace testutil {

using zfchiral::CMatrix;
using zfchiral::Complex;

inline CMatrix random_matrix(std::mt19937_64& rng, int dim = 4) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, int dim = 4) {
  const CMatrix m = random_matrix(rng, dim);
  return 0.5 * (m + m.adjoint());
}

inline CMatrix random_unit_norm(std::mt19937_64& rng, int dim = 4) {
  const CMatrix m = random_matrix(rng, dim);
  return m / m.norm();
}

}  // namespace testutil
