#include "zfchiral/spinops.hpp"

#include <cmath>
#include <string>

#include "zfchiral/errors.hpp"

namespace zfchiral {

namespace {

CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

SpinOperatorSet build_set() {
  const Complex i{0.0, 1.0};
  SpinOperatorSet s;
  s.spin1.x = 0.5 * from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  s.spin1.y = 0.5 * i * from_rows({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}});
  s.spin1.z = 0.5 * from_rows({{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}});
  s.spin2.x = 0.5 * from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
  s.spin2.y = 0.5 * i * from_rows({{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
  s.spin2.z = 0.5 * from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
  for (SpinOperators* op : {&s.spin1, &s.spin2}) {
    op->plus = op->x + i * op->y;
    op->minus = op->x - i * op->y;
  }
  s.fx = s.spin1.x + s.spin2.x;
  s.fy = s.spin1.y + s.spin2.y;
  s.fz = s.spin1.z + s.spin2.z;
  return s;
}

// Doubled quantum numbers keep half-integers exact.
int doubled(double v, const char* name) {
  const double d = 2.0 * v;
  const double r = std::round(d);
  if (!std::isfinite(v) || std::abs(d - r) > 1e-9) {
    throw ValidationError(std::string("clebsch_gordan: ") + name + " must be integer or half-integer");
  }
  return static_cast<int>(r);
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

Axis parse_axis(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::x;
    case 'y': case 'Y': return Axis::y;
    case 'z': case 'Z': return Axis::z;
    default: throw ValidationError(std::string("invalid axis '") + c + "'");
  }
}

char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

const CMatrix& SpinOperators::along(Axis a) const {
  switch (a) {
    case Axis::x: return x;
    case Axis::y: return y;
    case Axis::z: return z;
  }
  throw ValidationError("invalid axis");
}

const SpinOperators& SpinOperatorSet::spin(int index) const {
  if (index == 1) return spin1;
  if (index == 2) return spin2;
  throw ValidationError("spin index must be 1 or 2, got " + std::to_string(index));
}

const SpinOperatorSet& spin_operator_set() {
  static const SpinOperatorSet set = build_set();
  return set;
}

CMatrix spherical_single(int spin, int k, SphericalConvention conv) {
  const SpinOperators& op = spin_operator_set().spin(spin);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (k) {
    case 0: return op.z;
    case 1: return conv == SphericalConvention::condon_shortley ? CMatrix(-inv_sqrt2 * op.plus)
                                                                : CMatrix(0.5 * op.plus);
    case -1: return conv == SphericalConvention::condon_shortley ? CMatrix(inv_sqrt2 * op.minus)
                                                                 : CMatrix(0.5 * op.minus);
    default: throw ValidationError("spherical_single: k must be -1, 0 or 1, got " + std::to_string(k));
  }
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
  const int tj1 = doubled(j1, "j1"), tm1 = doubled(m1, "m1");
  const int tj2 = doubled(j2, "j2"), tm2 = doubled(m2, "m2");
  const int tj = doubled(j, "J"), tm = doubled(m, "M");
  if (tj1 < 0 || tj2 < 0 || tj < 0) throw ValidationError("clebsch_gordan: negative angular momentum");
  for (auto [jj, mm] : {std::pair{tj1, tm1}, std::pair{tj2, tm2}, std::pair{tj, tm}}) {
    if (std::abs(mm) > jj || (jj + mm) % 2 != 0) {
      throw ValidationError("clebsch_gordan: projection inconsistent with its angular momentum");
    }
  }
  if (tm1 + tm2 != tm) return 0.0;
  if (tj > tj1 + tj2 || tj < std::abs(tj1 - tj2) || (tj1 + tj2 + tj) % 2 != 0) return 0.0;

  // All factorial arguments below are integers once the halves are resolved.
  const int a = (tj1 + tj2 - tj) / 2;
  const int b = (tj1 - tj2 + tj) / 2;
  const int c = (-tj1 + tj2 + tj) / 2;
  const int d = (tj1 + tj2 + tj) / 2 + 1;
  const double log_pref = 0.5 * (std::log(tj + 1.0) + log_factorial(a) + log_factorial(b) +
                                 log_factorial(c) - log_factorial(d) +
                                 log_factorial((tj1 + tm1) / 2) + log_factorial((tj1 - tm1) / 2) +
                                 log_factorial((tj2 + tm2) / 2) + log_factorial((tj2 - tm2) / 2) +
                                 log_factorial((tj + tm) / 2) + log_factorial((tj - tm) / 2));
  const int k_min = std::max({0, (tj2 - tj - tm1) / 2, (tj1 - tj + tm2) / 2});
  const int k_max = std::min({a, (tj1 - tm1) / 2, (tj2 + tm2) / 2});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_term = log_factorial(k) + log_factorial(a - k) +
                            log_factorial((tj1 - tm1) / 2 - k) + log_factorial((tj2 + tm2) / 2 - k) +
                            log_factorial((tj - tj2 + tm1) / 2 + k) +
                            log_factorial((tj - tj1 - tm2) / 2 + k);
    const double term = std::exp(log_pref - log_term);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

TensorOperator bilinear_tensor_op(int rank, int component) {
  if (rank < 0 || rank > 2 || std::abs(component) > rank) {
    throw ValidationError("bilinear_tensor_op: invalid (q,k) = (" + std::to_string(rank) + "," +
                          std::to_string(component) + ")");
  }
  CMatrix t = CMatrix::Zero(4, 4);
  for (int k1 = -1; k1 <= 1; ++k1) {
    const int k2 = component - k1;
    if (std::abs(k2) > 1) continue;
    const double cg = clebsch_gordan(1, k1, 1, k2, rank, component);
    if (cg == 0.0) continue;
    t += cg * spherical_single(1, k1) * spherical_single(2, k2);
  }
  return {rank, component, t};
}

CMatrix rotation_about_axis(Axis axis, double theta1, double theta2) {
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) {
    throw ValidationError("rotation_about_axis: angles must be finite");
  }
  const SpinOperatorSet& ops = spin_operator_set();
  // Spin-1/2 generators square to 1/4, so exp(-i t I) = cos(t/2) - 2i sin(t/2) I.
  auto single = [](const CMatrix& gen, double theta) -> CMatrix {
    return std::cos(0.5 * theta) * identity(4) - Complex(0.0, 2.0 * std::sin(0.5 * theta)) * gen;
  };
  return single(ops.spin1.along(axis), theta1) * single(ops.spin2.along(axis), theta2);
}

CMatrix scalar_product() {
  const auto& s = spin_operator_set();
  return s.spin1.x * s.spin2.x + s.spin1.y * s.spin2.y + s.spin1.z * s.spin2.z;
}

CMatrix flip_flop_sum() {
  const auto& s = spin_operator_set();
  return s.spin1.plus * s.spin2.minus + s.spin1.minus * s.spin2.plus;
}

CMatrix flip_flop_difference() {
  const auto& s = spin_operator_set();
  return s.spin1.plus * s.spin2.minus - s.spin1.minus * s.spin2.plus;
}

}  // namespace zfchiral
