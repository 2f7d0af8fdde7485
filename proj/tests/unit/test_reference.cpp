// Frozen reference values. The numeric tables were produced by an
// independent dense-matrix implementation and must not be regenerated from
// this library.
#include <cmath>

#include <gtest/gtest.h>

#include "opoqed/hilbert.hpp"
#include "opoqed/lindblad.hpp"
#include "opoqed/spectra.hpp"
#include "opoqed/weakfield.hpp"

using namespace opoqed;

namespace {

SystemParams fig3(double F) {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 10.0;
  p.gamma = 1.0;
  p.F = F;
  p.n_max = 2;
  return p;
}

void expect_rel(Complex got, double want, double rel, const char* what) {
  EXPECT_LT(std::abs(got - want), rel * std::abs(want)) << what << " got " << got;
}

}  // namespace

TEST(Reference, FullSteadyStateFig3) {
  const SystemParams p = fig3(1e-3);
  const StateSpace s(2);
  const DensityMatrix rho = steady_state(build_liouvillian(p, s));
  const WeakFieldState w = WeakFieldState::from_density(rho, s);
  expect_rel(w.p00, 0.9999999793780414, 1e-14, "p00");
  expect_rel(w.pe0, 6.0223090633659435e-09, 1e-9, "pe0");
  expect_rel(w.p1, 9.604544672199463e-09, 1e-9, "p1");
  expect_rel(w.pe1, 8.899964118678632e-11, 1e-8, "pe1");
  expect_rel(w.p2, 4.906105251060816e-09, 1e-9, "p2");
  expect_rel(w.c01p, -9.433961935160129e-06, 1e-10, "c01p");
  expect_rel(w.c02, 7.004359446776728e-05, 1e-10, "c02");
  expect_rel(w.ce1, -2.121158119815109e-09, 1e-9, "ce1");
  expect_rel(w.c12, -6.607886229666347e-10, 1e-9, "c12");
  expect_rel(expectation(rho, photon_number(s)), 1.9505754815507884e-08, 1e-9, "n");
}

TEST(Reference, WeakFieldLimitFig3) {
  const double F = 1e-3;
  const WeakFieldState w = weakfield_steady_state(fig3(F));
  const double F2 = F * F;
  expect_rel(w.p1 / F2, 0.009604544915153668, 1e-10, "p1");
  expect_rel(w.pe0 / F2, 0.006022309244096355, 1e-10, "pe0");
  expect_rel(w.c02 / F, 0.0700435962496108, 1e-12, "c02");
  expect_rel(w.c01p / F, -0.00943396226415094, 1e-12, "c01p");
  expect_rel(w.c12 / F2, -0.0006607886438642529, 1e-10, "c12");
  expect_rel(w.ce1 / F2, -0.002121158182033937, 1e-10, "ce1");
  expect_rel(w.p2 / F2, 0.0049061053755784945, 1e-10, "p2");
  expect_rel(w.pe1 / F2, 8.899964400142397e-05, 1e-10, "pe1");
}

TEST(Reference, LowestOrderCoherencesClosedForm) {
  // c01p = −√2 g c02 / (γ/2 + κ),  c02 = √2 F / (2κ + 2g²/(γ/2 + κ))
  for (double g : {0.0, 0.1, 1.0, 30.0}) {
    for (double kappa : {0.1, 10.0, 100.0}) {
      SystemParams p = fig3(1e-4);
      p.g = g;
      p.kappa = kappa;
      const WeakFieldState w = weakfield_steady_state(p);
      const double half = 0.5 * p.gamma + kappa;
      const double c02 = std::sqrt(2.0) * p.F / (2.0 * kappa + 2.0 * g * g / half);
      const double c01p = -std::sqrt(2.0) * g * c02 / half;
      EXPECT_NEAR(w.c02.real(), c02, 1e-12 * c02);
      EXPECT_NEAR(w.c01p.real(), c01p, 1e-12 * std::abs(c02));
      EXPECT_NEAR(w.c02.imag(), 0.0, 1e-20);
    }
  }
}

// Without the atom the model is a degenerate parametric oscillator below
// threshold, with ε = 2F:
//   ⟨a†a⟩ = ε²/(2(κ² − ε²))
//   I(ω)  = (ε/2)[1/((κ − ε)² + ω²) − 1/((κ + ε)² + ω²)]
TEST(Reference, DegenerateOscillatorWithoutAtom) {
  SystemParams p;
  p.g = 0.0;
  p.kappa = 1.0;
  p.gamma = 1.0;
  p.F = 0.2;
  p.n_max = 12;
  const StateSpace s(p.n_max);
  const DensityMatrix rho = steady_state_from_vacuum(build_liouvillian(p, s), s);
  const double eps = 2.0 * p.F, k = p.kappa;
  const double n_exact = eps * eps / (2.0 * (k * k - eps * eps));
  EXPECT_NEAR(expectation(rho, photon_number(s)).real(), n_exact, 1e-5 * n_exact);

  const std::vector<double> omega = {-2.5, -0.3, 0.0, 0.3, 1.0, 2.5};
  const auto got = resolvent_spectrum(regression_system(p, Channel::A, rho), omega);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double w = omega[i];
    const double want =
        0.5 * eps * (1.0 / ((k - eps) * (k - eps) + w * w) - 1.0 / ((k + eps) * (k + eps) + w * w));
    EXPECT_NEAR(got[i], want, 1e-5 * want) << "omega " << w;
  }
}

TEST(Reference, EmptyCavityWeakDriveSquaredLorentzian) {
  // The ε → 0 limit of the oscillator spectrum below is 2κε²/(κ² + ω²)².
  SystemParams p;
  p.g = 0.0;
  p.kappa = 10.0;
  p.gamma = 1.0;
  p.F = 1e-4;
  p.n_max = 2;
  const std::vector<double> omega = {0.0, 5.0, 10.0, 25.0};
  const auto got = weakfield_incoherent_spectrum(p, SpectrumChannel::transmitted, omega);
  for (std::size_t i = 1; i < omega.size(); ++i) {
    const double w = omega[i], k = p.kappa;
    const double want_ratio = std::pow(k * k / (k * k + w * w), 2);
    EXPECT_NEAR(got[i] / got[0], want_ratio, 1e-9) << "omega " << w;
  }
}
