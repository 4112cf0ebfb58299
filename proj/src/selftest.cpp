#include "zfchiral/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "zfchiral/analytic.hpp"
#include "zfchiral/config.hpp"
#include "zfchiral/errors.hpp"
#include "zfchiral/spectra.hpp"

namespace zfchiral {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// A check returns its measured defect; it passes when defect <= tol.
struct Check {
  const char* module;
  const char* name;
  double tol;
  std::function<double()> measure;
};

CMatrix test_hermitian() {
  CMatrix m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = Complex(std::sin(1.0 + r + 3 * c), std::cos(2.0 * r - c));
  return (m + dagger(m)) * 0.5;
}

double lorentzian_recovery() {
  const LorentzianPeak truth{12.3, 0.4, 2.5, 0.7};
  Spectrum s;
  s.dt = 0.002;
  s.n_samples = s.n_padded = 16384;
  for (std::size_t k = 0; k <= s.n_padded / 2; ++k) {
    const double f = static_cast<double>(k) * s.bin_width();
    s.freq_hz.push_back(f);
    s.value.push_back(truth.model(f));
  }
  const FitResult r = fit_lorentzian(s, {10.3, 14.3});
  return std::max({std::abs(r.peak.f0 - truth.f0) / truth.f0, std::abs(r.peak.gamma - truth.gamma) / truth.gamma,
                   std::abs(r.peak.amp - truth.amp) / truth.amp, std::abs(r.peak.phase - truth.phase)});
}

std::vector<Check> checks() {
  const auto& ops = spin_operator_set();
  const SpinPair sp;
  const ZFParams p;
  return {
      {"qmatrix", "eigendecomposition reconstructs input", 1e-12,
       [] {
         const CMatrix h = test_hermitian();
         return max_abs(reconstruct(herm_eigendecompose(h)) - h);
       }},
      {"qmatrix", "propagator is unitary", 1e-12,
       [] {
         const CMatrix u = unitary_propagator(test_hermitian(), 0.37);
         return max_abs(dagger(u) * u - identity(4));
       }},
      {"spinops", "[Ix, Iy] = i Iz for both spins", 1e-15,
       [=] {
         double d = 0.0;
         for (int k = 1; k <= 2; ++k) {
           const auto& s = ops.spin(k);
           d = std::max(d, max_abs(commutator(s.x, s.y) - Complex(0, 1) * s.z));
         }
         return d;
       }},
      {"spinops", "Clebsch-Gordan orthonormality for 1 x 1", 1e-12,
       [] {
         double d = 0.0;
         for (int j = 0; j <= 2; ++j)
           for (int jp = 0; jp <= 2; ++jp)
             for (int m = -std::min(j, jp); m <= std::min(j, jp); ++m) {
               double sum = 0.0;
               for (int m1 = -1; m1 <= 1; ++m1) {
                 const int m2 = m - m1;
                 if (std::abs(m2) > 1) continue;
                 sum += clebsch_gordan(1, m1, 1, m2, j, m) * clebsch_gordan(1, m1, 1, m2, jp, m);
               }
               d = std::max(d, std::abs(sum - (j == jp ? 1.0 : 0.0)));
             }
         return d;
       }},
      {"spinops", "rank-0 bilinear tensor equals -I1.I2/sqrt(3)", 1e-12,
       [] { return max_abs(bilinear_tensor_op(0, 0).matrix + scalar_product() / std::sqrt(3.0)); }},
      {"coupling", "decompose/recompose round trip", 1e-12,
       [] {
         CartesianJ j;
         j.m << 140.0, 2.0, -1.5, 0.5, 130.0, 3.0, 0.25, -4.0, 125.0;
         return (recompose(decompose(j)).m - j.m).cwiseAbs().maxCoeff();
       }},
      {"coupling", "enantiomer reflection flips rank-1 zero component", 1e-12,
       [] {
         CartesianJ j;
         j.m << 140.0, 2.0, -1.5, 0.5, 130.0, 3.0, 0.25, -4.0, 125.0;
         return std::abs(rank1_zero_component(decompose(reflect_enantiomer(j))) +
                         rank1_zero_component(decompose(j)));
       }},
      {"coupling", "small-d matrices are orthogonal", 1e-12,
       [] {
         double d = 0.0;
         for (int q = 0; q <= 2; ++q) {
           const Eigen::MatrixXd m = wigner_small_d_matrix(q, 0.83);
           d = std::max(d, (m.transpose() * m - Eigen::MatrixXd::Identity(2 * q + 1, 2 * q + 1)).cwiseAbs().maxCoeff());
         }
         return d;
       }},
      {"coupling", "order_parameter and required_field are inverses", 1e-12,
       [] {
         OrientationConditions c;
         c.e_applied = required_field(0.01, c.mu_debye, c.eps_r, c.temperature);
         return std::abs(order_parameter(c) - 0.01) / 0.01;
       }},
      {"dynamics", "trace and purity conserved over 1000 steps", 1e-12,
       [=] {
         DensityMatrix rho = ideal_inverted_state(sp);
         const DensityMatrix out = evolve(rho, build_hamiltonian(p), 0.002, 1000);
         const CMatrix a = rho.matrix(), b = out.matrix();
         return std::max(std::abs(b.trace() - a.trace()),
                         std::abs((b * b).trace() - (a * a).trace()));
       }},
      {"dynamics", "enantiomer x traces cancel", 1e-12,
       [=] {
         ZFParams m = p;
         m.j1bar = -p.j1bar;
         const DensityMatrix rho = ideal_inverted_state(sp);
         const TimeSeries a = propagate(rho, build_hamiltonian(p), 0.002, 2048, sp);
         const TimeSeries b = propagate(rho, build_hamiltonian(m), 0.002, 2048, sp);
         double d = 0.0;
         for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.samples[k].mx + b.samples[k].mx));
         return d;
       }},
      {"dynamics", "transitions invariant under j1bar sign", 1e-12,
       [=] {
         ZFParams m = p;
         m.j1bar = -p.j1bar;
         const auto a = transition_frequencies(build_hamiltonian(p));
         const auto b = transition_frequencies(build_hamiltonian(m));
         double d = 0.0;
         for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k].frequency_hz - b[k].frequency_hz));
         return d;
       }},
      {"analytic", "coherence table matches matrix elements", 1e-12,
       [=] {
         const PerturbedEigensystem sys = perturbed_states(100.0, 1.0, 0.0, {1.0, false});
         const CoherenceTable t = coherence_table(sp, sys);
         const double gmax = std::max(std::abs(sp.gamma1), std::abs(sp.gamma2));
         const CMatrix dev = -sp.gamma1 * ops.spin1.y + sp.gamma2 * ops.spin2.y;
         double d = 0.0;
         for (Observable o : {Observable::mx, Observable::my}) {
           const CMatrix mop = magnetization(sp, o == Observable::mx ? Axis::x : Axis::y);
           for (int pm : {1, -1}) {
             const CVector& s = pm == 1 ? sys.plus1 : sys.minus1;
             const CoherenceEntry& e = t.entry(o, pm);
             d = std::max({d, std::abs(s.dot(mop * sys.alpha) - e.v_alpha), std::abs(s.dot(mop * sys.beta) - e.v_beta),
                           std::abs(s.dot(dev * sys.alpha) - e.rho_alpha),
                           std::abs(s.dot(dev * sys.beta) - e.rho_beta)});
           }
         }
         return d / gmax;
       }},
      {"analytic", "amplitude ratio odd in j1bar", 1e-15,
       [=] { return std::abs(amplitude_ratio(sp, 0.01).value() + amplitude_ratio(sp, -0.01).value()); }},
      {"spectra", "synthetic Lorentzian recovered", 1e-6, lorentzian_recovery},
      {"spectra", "Parseval energy balance", 1e-9,
       [] {
         std::vector<double> x(1000);
         for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::cos(0.3 * k) * std::exp(-0.002 * k) + 0.1;
         const Spectrum s = transform(x, 0.01);
         const double et = time_energy(x, 0.01);
         return std::abs(spectral_energy(s) - et) / et;
       }},
      {"cli", "dt = 0 rejected naming acquisition.dt", 0.0,
       [] {
         try {
           parse_config("[coupling]\nj0 = 100\nj1bar = 1\ndbar = 0.7\n[acquisition]\ndt = 0\n").validate();
         } catch (const ValidationError& e) {
           return std::string(e.what()).find("acquisition.dt") == std::string::npos ? 1.0 : 0.0;
         }
         return 1.0;
       }},
  };
}

}  // namespace

std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> out;
  for (const Check& c : checks()) {
    SelftestCheck r{c.module, c.name, false, {}};
    try {
      const double d = c.measure();
      r.passed = std::isfinite(d) && d <= c.tol;
      r.detail = "defect " + sci(d) + " (tol " + sci(c.tol) + ")";
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace zfchiral
