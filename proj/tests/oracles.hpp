#pragma once

// Independent reference constructions shared by the unit and acceptance tests.

#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "zfchiral/qmatrix.hpp"

namespace oracle {

using zfchiral::CMatrix;
using zfchiral::Complex;
using zfchiral::kron;

// Single-spin Pauli-based operators; spin 1 is the fast (right) factor.
struct Pauli {
  CMatrix x, y, z, id;
  Pauli() : x(2, 2), y(2, 2), z(2, 2), id(CMatrix::Identity(2, 2)) {
    x << 0.0, 0.5, 0.5, 0.0;
    y << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
    z << 0.5, 0.0, 0.0, -0.5;
  }
  CMatrix on1(const CMatrix& m) const { return kron(id, m); }
  CMatrix on2(const CMatrix& m) const { return kron(m, id); }
};

// Clebsch-Gordan coefficients built by the lowering-operator construction:
// start from the stretched state, lower with J-, and Gram-Schmidt the next
// multiplet with the Condon-Shortley phase <j1 j1; j2 (J - j1)|J J> > 0.
// Quantum numbers are doubled integers.
class LadderCG {
 public:
  LadderCG(int tj1, int tj2) : tj1_(tj1), tj2_(tj2) {
    const int d1 = tj1 + 1, d2 = tj2 + 1;
    const int dim = d1 * d2;
    auto idx = [&](int a, int b) { return a * d2 + b; };  // m1 = j1 - a, m2 = j2 - b
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(dim, dim);
    auto lcoef = [](int tj, int tm) {
      const double j = tj / 2.0, m = tm / 2.0;
      return std::sqrt(j * (j + 1) - m * (m - 1));
    };
    for (int a = 0; a < d1; ++a)
      for (int b = 0; b < d2; ++b) {
        const int tm1 = tj1 - 2 * a, tm2 = tj2 - 2 * b;
        if (a + 1 < d1) lower(idx(a + 1, b), idx(a, b)) += lcoef(tj1, tm1);
        if (b + 1 < d2) lower(idx(a, b + 1), idx(a, b)) += lcoef(tj2, tm2);
      }
    std::vector<Eigen::VectorXd> all;
    for (int tj = tj1 + tj2; tj >= std::abs(tj1 - tj2); tj -= 2) {
      // Highest-weight state: M = J subspace orthogonal to earlier multiplets.
      Eigen::VectorXd best;
      for (int a = 0; a < d1; ++a) {
        const int b2 = (tj1 + tj2 - tj) - 2 * a;  // 2b such that m1 + m2 = J
        if (b2 < 0 || b2 % 2 || b2 / 2 >= d2) continue;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        v(idx(a, b2 / 2)) = 1.0;
        for (const auto& u : all) v -= u.dot(v) * u;
        if (v.norm() > 1e-8 && (best.size() == 0 || v.norm() > best.norm())) best = v;
      }
      best.normalize();
      // Phase: coefficient with m1 = j1 positive.
      const int b_top = (tj1 + tj2 - tj - 0) / 2;  // a = 0
      if (best(idx(0, b_top)) < 0) best = -best;
      Eigen::VectorXd v = best;
      for (int tm = tj; tm >= -tj; tm -= 2) {
        all.push_back(v);
        for (int a = 0; a < d1; ++a)
          for (int b = 0; b < d2; ++b) table_[{tj1 - 2 * a, tj2 - 2 * b, tj, tm}] = v(idx(a, b));
        if (tm > -tj) {
          v = lower * v;
          v.normalize();
        }
      }
    }
  }

  double operator()(int tm1, int tm2, int tj, int tm) const {
    auto it = table_.find({tm1, tm2, tj, tm});
    return it == table_.end() ? 0.0 : it->second;
  }

 private:
  int tj1_, tj2_;
  std::map<std::tuple<int, int, int, int>, double> table_;
};

// Racah closed form with long-double factorials, written out separately.
inline long double fact(int n) {
  long double r = 1.0L;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double racah_oracle(int tj1, int tm1, int tj2, int tm2, int tj, int tm) {
  if (tm1 + tm2 != tm) return 0.0;
  if (tj > tj1 + tj2 || tj < std::abs(tj1 - tj2)) return 0.0;
  auto h = [](int twice) { return twice / 2; };
  const long double front =
      std::sqrt((tj + 1) * fact(h(tj + tj1 - tj2)) * fact(h(tj - tj1 + tj2)) * fact(h(tj1 + tj2 - tj)) /
                fact(h(tj1 + tj2 + tj) + 1)) *
      std::sqrt(fact(h(tj + tm)) * fact(h(tj - tm)) * fact(h(tj1 - tm1)) * fact(h(tj1 + tm1)) * fact(h(tj2 - tm2)) *
                fact(h(tj2 + tm2)));
  long double sum = 0.0L;
  for (int k = 0; k <= 40; ++k) {
    const int d[6] = {k, h(tj1 + tj2 - tj) - k, h(tj1 - tm1) - k, h(tj2 + tm2) - k, h(tj - tj2 + tm1) + k,
                      h(tj - tj1 - tm2) + k};
    bool ok = true;
    long double den = 1.0L;
    for (int v : d) {
      if (v < 0) ok = false;
      else den *= fact(v);
    }
    if (ok) sum += (k % 2 ? -1.0L : 1.0L) / den;
  }
  return static_cast<double>(front * sum);
}

inline CMatrix cs_spherical(const CMatrix& x, const CMatrix& y, const CMatrix& z, int k) {
  if (k == 0) return z;
  return (k == 1 ? -1.0 : 1.0) * (x + (k == 1 ? 1.0 : -1.0) * Complex(0.0, 1.0) * y) / std::sqrt(2.0);
}


}  // namespace oracle
