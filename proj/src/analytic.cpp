#include "zfchiral/analytic.hpp"

#include <cmath>

#include "zfchiral/errors.hpp"

namespace zfchiral {

namespace {
constexpr double kTwoPi = 2.0 * constants::pi;
}

double PerturbedEigensystem::omega_alpha() const { return kTwoPi * (energy_alpha - energy_pm1); }
double PerturbedEigensystem::omega_beta() const { return kTwoPi * (energy_beta - energy_pm1); }

Eigen::Matrix<Complex, 4, 2> PerturbedEigensystem::overlaps() const {
  Eigen::Matrix<Complex, 4, 2> o;
  const CVector* basis[4] = {&singlet, &zero, &plus1, &minus1};
  for (int r = 0; r < 4; ++r) {
    o(r, 0) = basis[r]->dot(alpha);
    o(r, 1) = basis[r]->dot(beta);
  }
  return o;
}

PerturbedEigensystem perturbed_states(double j0, double j1bar, double dbar, PerturbationOptions opts) {
  if (j0 == 0.0 || !std::isfinite(j0)) throw ValidationError("perturbed_states: J0 must be finite and nonzero");
  if (!(std::abs(j1bar) < std::abs(j0))) {
    throw ValidationError("perturbed_states: perturbation theory needs |J1| < |J0|");
  }
  PerturbedEigensystem sys;
  sys.j0 = j0;
  sys.j1bar = j1bar;
  sys.dbar = dbar;
  sys.beyond_perturbative = std::abs(j1bar / j0) > 0.1;
  const double eps = opts.mixing_scale * j1bar / j0;
  sys.mixing = Complex(0.0, -eps);
  sys.norm = std::sqrt(1.0 + eps * eps);

  const double r2 = 1.0 / std::sqrt(2.0);
  sys.singlet = CVector::Zero(4);
  sys.zero = CVector::Zero(4);
  sys.plus1 = CVector::Zero(4);
  sys.minus1 = CVector::Zero(4);
  sys.singlet(1) = -r2;
  sys.singlet(2) = r2;
  sys.zero(1) = r2;
  sys.zero(2) = r2;
  sys.plus1(0) = 1.0;
  sys.minus1(3) = 1.0;
  sys.alpha = (sys.singlet + sys.mixing * sys.zero) / sys.norm;
  sys.beta = (sys.zero + sys.mixing * sys.singlet) / sys.norm;

  // First-order dipolar shifts: |0> by +D, |+-1> by -D/2, |S> unshifted.
  sys.energy_alpha = -0.75 * j0;
  sys.energy_beta = 0.25 * j0 + dbar;
  sys.energy_pm1 = 0.25 * j0 - 0.5 * dbar;
  if (opts.second_order_shifts) {
    const double coupling = eps * j0;  // |<S|V|0>| in Hz
    const double gap = sys.energy_beta - sys.energy_alpha;
    const double shift = coupling * coupling / gap;
    sys.energy_alpha -= shift;
    sys.energy_beta += shift;
  }
  return sys;
}

const CoherenceEntry& CoherenceTable::entry(Observable o, int pm) const {
  if (pm != 1 && pm != -1) throw ValidationError("CoherenceTable: pm must be +1 or -1");
  const int idx = pm == 1 ? 0 : 1;
  return o == Observable::mx ? mx[idx] : my[idx];
}

CoherenceTable CoherenceTable::pauli_normalized() const {
  CoherenceTable t = *this;
  for (CoherenceEntry* e : {&t.mx[0], &t.mx[1], &t.my[0], &t.my[1]}) {
    e->v_alpha /= kPauliToTraceScale;
    e->v_beta /= kPauliToTraceScale;
    e->rho_alpha /= kPauliToTraceScale;
    e->rho_beta /= kPauliToTraceScale;
  }
  return t;
}

CoherenceTable coherence_table(const SpinPair& sp, const PerturbedEigensystem& sys) {
  const double g1 = sp.gamma1, g2 = sp.gamma2;
  const double eps = -sys.mixing.imag();
  const double n = sys.norm;
  const Complex i{0.0, 1.0};
  // Pauli normalization factors, halved at the end.
  const double v_pref = std::sqrt(2.0) / (2.0 * n);
  const double r_pref = 1.0 / (n * std::sqrt(2.0));
  CoherenceTable t;
  for (int idx = 0; idx < 2; ++idx) {
    const double pm = idx == 0 ? 1.0 : -1.0;
    CoherenceEntry x, y;
    x.v_alpha = v_pref * (g1 * (-pm - i * eps) + g2 * (pm - i * eps));
    x.v_beta = v_pref * (g1 * (1.0 + pm * i * eps) + g2 * (1.0 - pm * i * eps));
    x.rho_alpha = r_pref * (g1 * (-i + pm * eps) + g2 * (-i - pm * eps));
    x.rho_beta = r_pref * (g1 * (pm * i - eps) + g2 * (-pm * i - eps));
    y.v_alpha = -pm * v_pref * (g1 * (eps - pm * i) + g2 * (eps + pm * i));
    y.v_beta = v_pref * (g1 * (eps - pm * i) - g2 * (eps + pm * i));
    y.rho_alpha = x.rho_alpha;
    y.rho_beta = x.rho_beta;
    for (CoherenceEntry* e : {&x, &y}) {
      e->v_alpha *= kPauliToTraceScale;
      e->v_beta *= kPauliToTraceScale;
      e->rho_alpha *= kPauliToTraceScale;
      e->rho_beta *= kPauliToTraceScale;
    }
    t.mx[idx] = x;
    t.my[idx] = y;
  }
  return t;
}

double coherence_signal(const CoherenceTable& table, const PerturbedEigensystem& sys, Observable o, double t) {
  // Each |+-1><m| coherence and its conjugate contribute
  // 2 Re[rho_{+-1,m} conj(V_{+-1,m}) exp(i w_m t)], w_m = E_m - E_{+-1}.
  const Complex phase_a = std::polar(1.0, sys.omega_alpha() * t);
  const Complex phase_b = std::polar(1.0, sys.omega_beta() * t);
  double sum = 0.0;
  for (int pm : {1, -1}) {
    const CoherenceEntry& e = table.entry(o, pm);
    sum += 2.0 * (e.rho_alpha * std::conj(e.v_alpha) * phase_a).real();
    sum += 2.0 * (e.rho_beta * std::conj(e.v_beta) * phase_b).real();
  }
  return sum;
}

double mx_signal(double t, const SpinPair& sp, const PerturbedEigensystem& sys) {
  const double r = sys.j1bar / sys.j0;
  const double pref = 4.0 * sp.gamma1 * sp.gamma2 * r / (sys.norm * sys.norm);
  return pref * (std::cos(sys.omega_alpha() * t) - std::cos(sys.omega_beta() * t));
}

double my_signal(double t, const SpinPair& sp, const PerturbedEigensystem& sys) {
  const double r = sys.j1bar / sys.j0;
  const double g1 = sp.gamma1, g2 = sp.gamma2;
  const double pref = -(g1 * g1 - g2 * g2) * (1.0 + r * r) / (sys.norm * sys.norm);
  return pref * (std::cos(sys.omega_alpha() * t) + std::cos(sys.omega_beta() * t));
}

SignedRatio amplitude_ratio(const SpinPair& sp, double r) {
  const double g1 = sp.gamma1, g2 = sp.gamma2;
  const double denom = (g1 * g1 - g2 * g2) * (1.0 + r * r);
  if (denom == 0.0) throw ValidationError("amplitude_ratio: equal gyromagnetic ratios give no M_y signal");
  const double v = 4.0 * g1 * g2 * r / denom;
  SignedRatio out;
  out.magnitude = std::abs(v);
  out.sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
  return out;
}

}  // namespace zfchiral
