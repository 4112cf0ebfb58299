#include <cmath>
#include <map>
#include <tuple>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "zfchiral/errors.hpp"
#include "zfchiral/coupling.hpp"
#include "zfchiral/spinops.hpp"

using namespace zfchiral;
using namespace oracle;

namespace {

const Complex I{0.0, 1.0};
const double kRt2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("spin operators match the explicit product-operator matrices") {
  const auto& s = spin_operator_set();
  const Pauli p;
  CHECK(max_abs(s.spin1.x - p.on1(p.x)) == 0.0);
  CHECK(max_abs(s.spin1.y - p.on1(p.y)) == 0.0);
  CHECK(max_abs(s.spin1.z - p.on1(p.z)) == 0.0);
  CHECK(max_abs(s.spin2.x - p.on2(p.x)) == 0.0);
  CHECK(max_abs(s.spin2.y - p.on2(p.y)) == 0.0);
  CHECK(max_abs(s.spin2.z - p.on2(p.z)) == 0.0);
  // Entries quoted with 1-based indices.
  CHECK(s.spin1.z(0, 0) == Complex(0.5));
  CHECK(s.spin1.z(1, 1) == Complex(-0.5));
  CHECK(s.spin2.x(0, 2) == Complex(0.5));
  CHECK(max_abs(s.fx - s.spin1.x - s.spin2.x) == 0.0);
  CHECK(max_abs(s.fz - s.spin1.z - s.spin2.z) == 0.0);
}

TEST_CASE("angular momentum commutation relations") {
  const auto& s = spin_operator_set();
  for (int k = 1; k <= 2; ++k) {
    const auto& o = s.spin(k);
    CHECK(max_abs(commutator(o.x, o.y) - I * o.z) < 1e-14);
    CHECK(max_abs(commutator(o.y, o.z) - I * o.x) < 1e-14);
    CHECK(max_abs(commutator(o.z, o.x) - I * o.y) < 1e-14);
    CHECK(max_abs(o.plus - (o.x + I * o.y)) == 0.0);
    CHECK(max_abs(o.minus - (o.x - I * o.y)) == 0.0);
  }
  for (Axis a : {Axis::x, Axis::y, Axis::z})
    for (Axis b : {Axis::x, Axis::y, Axis::z}) CHECK(max_abs(commutator(s.spin1.along(a), s.spin2.along(b))) < 1e-14);
  CHECK_THROWS_AS(s.spin(3), ValidationError);
}

TEST_CASE("axis parsing") {
  CHECK(parse_axis('x') == Axis::x);
  CHECK(parse_axis('Y') == Axis::y);
  CHECK(axis_name(Axis::z) == 'z');
  CHECK_THROWS_AS(parse_axis('w'), ValidationError);
}

TEST_CASE("single-spin spherical components") {
  const auto& s = spin_operator_set();
  for (int i = 1; i <= 2; ++i) {
    const auto& o = s.spin(i);
    CHECK(max_abs(spherical_single(i, 0) - o.z) == 0.0);
    // Condon-Shortley signs: the difference, not the sum, gives Ix.
    CHECK(max_abs(spherical_single(i, 1) - spherical_single(i, -1) + kRt2 * o.x) < 1e-15);
    CHECK(max_abs(spherical_single(i, 1) + spherical_single(i, -1) + I * kRt2 * o.y) < 1e-15);
    CHECK(max_abs(spherical_single(i, 1).adjoint() + spherical_single(i, -1)) < 1e-15);
    const auto add = SphericalConvention::additive;
    CHECK(max_abs(spherical_single(i, 1, add) + spherical_single(i, -1, add) - o.x) < 1e-15);
  }
  CHECK_THROWS_AS(spherical_single(1, 2), ValidationError);
  CHECK_THROWS_AS(spherical_single(0, 0), ValidationError);
}

TEST_CASE("Clebsch-Gordan quoted values") {
  CHECK(clebsch_gordan(1, 1, 1, 1, 2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(clebsch_gordan(1, 0, 1, 0, 0, 0) + 1.0 / std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(clebsch_gordan(1, 1, 1, -1, 1, 0) - 1.0 / kRt2) < 1e-14);
  CHECK(clebsch_gordan(1, 1, 1, 0, 2, 2) == 0.0);   // M != m1 + m2
  CHECK(clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0);   // triangle rule
}

TEST_CASE("Clebsch-Gordan against the lowering-operator construction") {
  for (auto [tj1, tj2] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{2, 1}, std::pair{4, 2}, std::pair{3, 2}}) {
    const LadderCG oracle(tj1, tj2);
    for (int tj = std::abs(tj1 - tj2); tj <= tj1 + tj2; tj += 2)
      for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
        for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2) {
          const int tm = tm1 + tm2;
          if (std::abs(tm) > tj) continue;
          const double lib = clebsch_gordan(tj1 / 2.0, tm1 / 2.0, tj2 / 2.0, tm2 / 2.0, tj / 2.0, tm / 2.0);
          CHECK(std::abs(lib - oracle(tm1, tm2, tj, tm)) < 1e-12);
          CHECK(std::abs(lib - racah_oracle(tj1, tm1, tj2, tm2, tj, tm)) < 1e-12);
        }
  }
}

TEST_CASE("Clebsch-Gordan orthogonality for 1 x 1") {
  for (int j = 0; j <= 2; ++j)
    for (int jp = 0; jp <= 2; ++jp)
      for (int m = -j; m <= j; ++m)
        for (int mp = -jp; mp <= jp; ++mp) {
          double sum = 0.0;
          for (int m1 = -1; m1 <= 1; ++m1)
            for (int m2 = -1; m2 <= 1; ++m2)
              sum += clebsch_gordan(1, m1, 1, m2, j, m) * clebsch_gordan(1, m1, 1, m2, jp, mp);
          CHECK(std::abs(sum - ((j == jp && m == mp) ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("Clebsch-Gordan rejects malformed quantum numbers") {
  CHECK_THROWS_AS(clebsch_gordan(1, 2, 1, 0, 2, 2), ValidationError);
  CHECK_THROWS_AS(clebsch_gordan(0.3, 0, 1, 0, 1, 0), ValidationError);
  CHECK_THROWS_AS(clebsch_gordan(-1, 0, 1, 0, 1, 0), ValidationError);
  CHECK_THROWS_AS(clebsch_gordan(1, 0.5, 1, 0, 1, 0), ValidationError);
}

TEST_CASE("bilinear tensors against brute-force summation") {
  const Pauli p;
  const LadderCG cg(2, 2);
  for (int q = 0; q <= 2; ++q)
    for (int k = -q; k <= q; ++k) {
      CMatrix brute = CMatrix::Zero(4, 4);
      for (int k1 = -1; k1 <= 1; ++k1)
        for (int k2 = -1; k2 <= 1; ++k2) {
          const double c = cg(2 * k1, 2 * k2, 2 * q, 2 * k);
          if (c == 0.0) continue;
          brute += c * cs_spherical(p.on1(p.x), p.on1(p.y), p.on1(p.z), k1) *
                   cs_spherical(p.on2(p.x), p.on2(p.y), p.on2(p.z), k2);
        }
      const TensorOperator t = bilinear_tensor_op(q, k);
      CHECK(t.rank == q);
      CHECK(t.component == k);
      CHECK(max_abs(t.matrix - brute) < 1e-12);
    }
}

TEST_CASE("bilinear tensor closed forms") {
  CHECK(max_abs(bilinear_tensor_op(0, 0).matrix + scalar_product() / std::sqrt(3.0)) < 1e-14);
  CHECK(max_abs(bilinear_tensor_op(1, 0).matrix + flip_flop_difference() / (2.0 * kRt2)) < 1e-14);
  CHECK(max_abs(I * flip_flop_difference() - (I * flip_flop_difference()).adjoint()) < 1e-14);
}

TEST_CASE("bilinear tensor invariants") {
  const auto& s = spin_operator_set();
  for (int q = 0; q <= 2; ++q)
    for (int k = -q; k <= q; ++k) {
      const CMatrix t = bilinear_tensor_op(q, k).matrix;
      // Coupling two Hermitian rank-1 sets gives T(q,k)^dagger = (-1)^(k+q) T(q,-k);
      // for even rank this is the familiar (-1)^k rule.
      const double sign = ((k + q) % 2) ? -1.0 : 1.0;
      CHECK(max_abs(t.adjoint() - sign * bilinear_tensor_op(q, -k).matrix) < 1e-14);
      if (q % 2 == 0) CHECK(max_abs(t.adjoint() - ((k % 2) ? -1.0 : 1.0) * bilinear_tensor_op(q, -k).matrix) < 1e-14);
      CHECK(max_abs(commutator(s.fz, t) - static_cast<double>(k) * t) < 1e-14);
    }
  const CMatrix t22 = bilinear_tensor_op(2, 2).matrix;
  CHECK(max_abs(commutator(s.fz, t22) - 2.0 * t22) < 1e-14);
  CHECK_THROWS_AS(bilinear_tensor_op(3, 0), ValidationError);
  CHECK_THROWS_AS(bilinear_tensor_op(1, 2), ValidationError);
}

TEST_CASE("tensor basis is complete for bilinear operators") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<CMatrix> basis;
  for (int q = 0; q <= 2; ++q)
    for (int k = -q; k <= q; ++k) basis.push_back(bilinear_tensor_op(q, k).matrix);
  for (int trial = 0; trial < 50; ++trial) {
    CMatrix b = CMatrix::Zero(4, 4);
    for (int k1 = -1; k1 <= 1; ++k1)
      for (int k2 = -1; k2 <= 1; ++k2)
        b += Complex(g(rng), g(rng)) * spherical_single(1, k1) * spherical_single(2, k2);
    CMatrix rebuilt = CMatrix::Zero(4, 4);
    for (const CMatrix& t : basis) rebuilt += (t.adjoint() * b).trace() / (t.adjoint() * t).trace() * t;
    CHECK(max_abs(rebuilt - b) < 1e-12);
  }
}

TEST_CASE("rotations") {
  const auto& s = spin_operator_set();
  CHECK(max_abs(rotation_about_axis(Axis::x, 0.0, 0.0) - identity(4)) < 1e-15);
  SUBCASE("pi about x flips I1y") {
    const CMatrix r = rotation_about_axis(Axis::x, constants::pi, 0.0);
    CHECK(max_abs(r * s.spin1.y * r.adjoint() + s.spin1.y) < 1e-15);
  }
  SUBCASE("matches the matrix exponential and is unitary") {
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
      const CMatrix r = rotation_about_axis(a, 0.7, -2.3);
      const CMatrix direct = (Complex(0, -0.7) * s.spin1.along(a)).exp() * (Complex(0, 2.3) * s.spin2.along(a)).exp();
      CHECK(max_abs(r - direct) < 1e-14);
      CHECK(max_abs(r.adjoint() * r - identity(4)) < 1e-12);
    }
  }
  SUBCASE("imperfect double pulse on a y-polarized pair") {
    // The residual after theta1 = pi, theta2 = 3.977 pi is the nutation
    // error of spin 2 alone: |gamma2| 2 |sin(theta2/2)| / |gamma|.
    const double g1 = constants::gamma_13c, g2 = constants::gamma_1h;
    const double t2 = 3.977 * constants::pi;
    const CMatrix r = rotation_about_axis(Axis::x, constants::pi, t2);
    const CMatrix out = r * (g1 * s.spin1.y + g2 * s.spin2.y) * r.adjoint();
    const CMatrix target = -g1 * s.spin1.y + g2 * s.spin2.y;
    const double residual = (out - target).norm() / target.norm();
    const double closed = g2 * 2.0 * std::abs(std::sin(t2 / 2.0)) / std::hypot(g1, g2);
    CHECK(std::abs(residual - closed) < 1e-12);
    CHECK(residual == doctest::Approx(0.0700).epsilon(0.01));
    // The spin-1 part is exact.
    const CMatrix r1 = rotation_about_axis(Axis::x, constants::pi, 0.0);
    CHECK(max_abs(r1 * s.spin1.y * r1.adjoint() + s.spin1.y) < 1e-15);
  }
  CHECK_THROWS_AS(rotation_about_axis(Axis::x, std::nan(""), 0.0), ValidationError);
}
