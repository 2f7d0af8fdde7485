#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"
#include "opoqed/lindblad.hpp"
#include "opoqed/spectra.hpp"
#include "opoqed/weakfield.hpp"

using namespace opoqed;

namespace {

SystemParams preset(double g, double kappa, double F = 1e-3, int n_max = 2) {
  SystemParams p;
  p.g = g;
  p.kappa = kappa;
  p.gamma = 1.0;
  p.F = F;
  p.n_max = n_max;
  return p;
}

std::vector<double> grid(double omega_max, int points) {
  return FrequencyGrid{omega_max, points}.values();
}

}  // namespace

TEST(FrequencyGrid, AntisymmetricAndResolved) {
  const SystemParams p = preset(1.0, 10.0);
  const FrequencyGrid g = default_frequency_grid(p);
  EXPECT_DOUBLE_EQ(g.omega_max, 40.0);
  EXPECT_EQ(g.points % 2, 1);
  EXPECT_GE(g.points, 4001);
  EXPECT_LE(g.spacing(), narrowest_width(p) / 20.0);
  const auto w = g.values();
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w[i], -w[w.size() - 1 - i]);
  EXPECT_EQ(w[w.size() / 2], 0.0);
  EXPECT_NO_THROW(check_grid_resolution(g, p));
  EXPECT_THROW(check_grid_resolution(FrequencyGrid{40.0, 101}, p), InsufficientGrid);
  EXPECT_THROW(check_grid_resolution(FrequencyGrid{40.0, 2}, p), InsufficientGrid);
}

TEST(FrequencyGrid, NarrowCavityNeedsMorePoints) {
  const FrequencyGrid g = default_frequency_grid(preset(20.0, 0.1));
  EXPECT_DOUBLE_EQ(g.omega_max, 80.0);
  EXPECT_LE(g.spacing(), 0.1 / 20.0);
}

TEST(Regression, CorrelationAtZeroIsVariance) {
  const SystemParams p = preset(3.0, 10.0, 0.2, 6);
  const StateSpace s(p.n_max);
  const DensityMatrix rho = steady_state(build_liouvillian(p, s));
  const RegressionSystem a = regression_system(p, Channel::A, rho);
  const Complex mean = expectation(rho, annihilation(s));
  const double var = expectation(rho, photon_number(s)).real() - std::norm(mean);
  EXPECT_NEAR(a.correlation_at_zero().real(), var, 1e-14);
  const RegressionSystem c = regression_system(p, Channel::C, rho);
  EXPECT_NEAR(c.correlation_at_zero().real(), expectation(rho, excitation(s)).real(), 1e-14);
  EXPECT_LT(a.spectral_abscissa(), 0.0);
}

TEST(Regression, NeedsTwoQuanta) {
  const SystemParams p = preset(1.0, 10.0, 1e-3, 1);
  const StateSpace s(1);
  const DensityMatrix rho = steady_state(build_liouvillian(p, s));
  EXPECT_THROW((void)regression_system(p, Channel::A, rho), ChannelUnavailable);
  EXPECT_THROW((void)transmitted_spectrum(p, FrequencyGrid{10.0, 401}), ChannelUnavailable);
}

TEST(Regression, PrintedMatrixStructure) {
  const SystemParams p = preset(2.0, 10.0);
  const Matrix printed = regression_matrix_paper(p);
  const Matrix ref = regression_matrix_lowest_order(p);
  ASSERT_EQ(printed.rows(), 8);
  ASSERT_EQ(ref.rows(), 8);
  // Decay rates on the diagonal agree.
  EXPECT_LT((printed.diagonal() - ref.diagonal()).cwiseAbs().maxCoeff(), 1e-14);
  // The printed matrix differs from the reference in at least one coupling.
  EXPECT_GT((printed - ref).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Regression, DualPathAgreesAsDriveVanishes) {
  const auto w = grid(40.0, 201);
  for (SpectrumChannel ch : {SpectrumChannel::transmitted, SpectrumChannel::fluorescent}) {
    const DualPathReport r = compare_regression_paths(preset(1.0, 10.0), ch, w);
    EXPECT_LT(r.extrapolated, 1e-8) << to_string(ch);
    EXPECT_LT(r.raw, 1e-4) << to_string(ch);
    const DualPathReport printed = compare_regression_paths(preset(1.0, 10.0), ch, w, true);
    EXPECT_GT(printed.extrapolated, 1e-3) << to_string(ch);
  }
}

TEST(Regression, TamperingIsDetected) {
  const auto w = grid(40.0, 201);
  const DualPathReport r = compare_regression_paths(
      preset(1.0, 10.0), SpectrumChannel::transmitted, w, false,
      [](Matrix& m) { m(2, 2) += Complex(0.5); });
  EXPECT_GT(r.extrapolated, 1e-4);
}

TEST(Resolvent, EigenbasisMatchesDirect) {
  const SystemParams p = preset(5.0, 10.0, 0.05, 4);
  const StateSpace s(p.n_max);
  const DensityMatrix rho = steady_state(build_liouvillian(p, s));
  const Resolvent r(regression_system(p, Channel::B, rho));
  EXPECT_TRUE(r.uses_eigenbasis());
  for (double w : {-13.0, -5.0, 0.0, 0.7, 4.9, 30.0}) {
    EXPECT_LT(std::abs(r(w) - r.direct(w)), 1e-10 * std::abs(r.direct(0.0))) << w;
  }
}

TEST(Resolvent, LargeSystemsUseHessenbergPath) {
  const SystemParams p = preset(2.0, 3.0, 0.3, 8);
  const StateSpace s(p.n_max);
  const DensityMatrix rho = steady_state(build_liouvillian(p, s));
  const RegressionSystem sys = regression_system(p, Channel::A, rho);
  ASSERT_GT(sys.evolution.rows(), Resolvent::kEigenLimit);
  const Resolvent r(sys);
  EXPECT_FALSE(r.uses_eigenbasis());
  const double peak = std::abs(r.direct(0.0));
  for (double w : {-7.0, 0.0, 1.5, 2.0, 12.0}) {
    EXPECT_LT(std::abs(r(w) - r.direct(w)), 1e-11 * peak) << w;
  }
}

TEST(Resolvent, PoleOnAxisThrows) {
  RegressionSystem sys;
  sys.evolution = Matrix::Constant(1, 1, Complex(0.0, 1.0));
  sys.initial = Vector::Ones(1);
  sys.readout = Vector::Ones(1);
  const Resolvent r(sys);
  EXPECT_THROW((void)r(-1.0), SingularResolvent);
  EXPECT_THROW((void)r.direct(-1.0), SingularResolvent);
  EXPECT_NO_THROW((void)r(0.0));
}

TEST(Resolvent, ScalarLorentzian) {
  RegressionSystem sys;
  sys.evolution = Matrix::Constant(1, 1, Complex(-2.0, 0.0));
  sys.initial = Vector::Ones(1);
  sys.readout = Vector::Ones(1);
  const std::vector<double> w = {-3.0, 0.0, 1.0};
  const auto s = resolvent_spectrum(sys, w);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(s[i], 4.0 / (4.0 + w[i] * w[i]), 1e-15);
}

TEST(Spectrum, SymmetricAndNormalized) {
  const SystemParams p = preset(3.0, 10.0);
  const SpectrumTable t = transmitted_spectrum(p, FrequencyGrid{40.0, 1601});
  const std::size_t n = t.omega.size();
  double peak = *std::max_element(t.incoherent.begin(), t.incoherent.end());
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(t.incoherent[i], t.incoherent[n - 1 - i], 1e-12 * peak);
    EXPECT_GE(t.incoherent[i], -1e-12 * peak);
  }
  const auto norm = t.normalized();
  EXPECT_DOUBLE_EQ(*std::max_element(norm.begin(), norm.end()), 1.0);
}

TEST(Spectrum, IntegratesToPhotonNumber) {
  const SystemParams p = preset(1.0, 10.0, 1e-2, 2);
  const FrequencyGrid g{2000.0, 400001};
  const SpectrumTable t = transmitted_spectrum(p, g);
  double area = 0.0;
  for (std::size_t i = 1; i < t.omega.size(); ++i) {
    area += 0.5 * (t.incoherent[i] + t.incoherent[i - 1]) * (t.omega[i] - t.omega[i - 1]);
  }
  const StateSpace s(p.n_max);
  const double n = expectation(steady_state(build_liouvillian(p, s)), photon_number(s)).real();
  EXPECT_NEAR(area / (2.0 * std::numbers::pi), n, 1e-6 * n);
}

TEST(Spectrum, WeakFieldPathTracksGeneralPath) {
  const SystemParams p = preset(10.0, 10.0, 1e-4);
  const auto w = grid(40.0, 1601);
  const auto weak = weakfield_incoherent_spectrum(p, SpectrumChannel::fluorescent, w);
  const SpectrumTable full = fluorescent_spectrum(p, FrequencyGrid{40.0, 1601});
  const double peak = *std::max_element(full.incoherent.begin(), full.incoherent.end());
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(weak[i], full.incoherent[i], 1e-6 * peak);
}

TEST(Squeezing, IdentityHoldsWithHalfConstant) {
  for (double g : {0.1, 1.0, 10.0}) {
    const SpectrumTable t = transmitted_spectrum(preset(g, 10.0), FrequencyGrid{40.0, 1601});
    const SqueezeIdentityReport r = squeezing_identity_check(t);
    ASSERT_FALSE(r.degenerate);
    EXPECT_NEAR(r.constant, 0.5, 1e-8) << g;
    EXPECT_LT(r.residual, 1e-8) << g;
  }
}

TEST(Squeezing, CancellationShrinksWithDrive) {
  const FrequencyGrid g{40.0, 1601};
  const auto a = squeezing_identity_check(transmitted_spectrum(preset(1.0, 10.0, 2e-3), g));
  const auto b = squeezing_identity_check(transmitted_spectrum(preset(1.0, 10.0, 1e-3), g));
  EXPECT_NEAR(a.cancellation / b.cancellation, 2.0, 0.01);
}
