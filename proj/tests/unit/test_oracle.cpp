#include <cmath>

#include <gtest/gtest.h>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"
#include "opoqed/oracle.hpp"
#include "opoqed/spectra.hpp"

using namespace opoqed;

namespace {

SystemParams preset(double g, double kappa) {
  SystemParams p;
  p.g = g;
  p.kappa = kappa;
  p.gamma = 1.0;
  p.F = 1e-3;
  p.n_max = 2;
  return p;
}

}  // namespace

TEST(Oracle, DefaultTauWindow) {
  EXPECT_DOUBLE_EQ(default_tau_max(preset(1.0, 10.0)), 60.0);
  EXPECT_DOUBLE_EQ(default_tau_max(preset(1.0, 0.1)), 300.0);
  SystemParams p = preset(1.0, 2.0);
  p.gamma = 0.0;
  EXPECT_DOUBLE_EQ(default_tau_max(p), 15.0);
  const int steps = default_tau_steps(preset(1.0, 10.0), 60.0, 40.0);
  EXPECT_GE(steps, static_cast<int>(60.0 * 20.0 * 40.0));
}

TEST(Oracle, TransformMatchesResolvent) {
  for (auto [g, kappa] : {std::pair{1.0, 10.0}, std::pair{10.0, 10.0}}) {
    const SystemParams p = preset(g, kappa);
    const FrequencyGrid grid{40.0, 1601};
    const auto w = grid.values();
    for (SpectrumChannel ch : {SpectrumChannel::transmitted, SpectrumChannel::fluorescent}) {
      const double tau_max = default_tau_max(p);
      const auto series = time_domain_correlation(p, ch, tau_max,
                                                  default_tau_steps(p, tau_max, grid.omega_max));
      const auto slow = spectrum_via_transform(series, w);
      const SpectrumTable t = ch == SpectrumChannel::transmitted ? transmitted_spectrum(p, grid)
                                                                 : fluorescent_spectrum(p, grid);
      const SpectrumComparison c = compare_spectra(w, slow, t.omega, t.incoherent);
      EXPECT_LT(c.max_relative, 1e-6) << g << " " << to_string(ch);
      EXPECT_FALSE(c.scale_warning);
    }
  }
}

TEST(Oracle, CorrelationStartsAtVariance) {
  const SystemParams p = preset(1.0, 10.0);
  const StateSpace s(p.n_max);
  const auto series = time_domain_correlation(p, SpectrumChannel::transmitted, 60.0, 6000);
  ASSERT_EQ(series.values.size(), 6001u);
  EXPECT_DOUBLE_EQ(series.tau.back(), 60.0);
  EXPECT_GT(series.values.front().real(), 0.0);
  EXPECT_LT(std::abs(series.values.back()), 1e-8 * std::abs(series.values.front()));
}

TEST(Oracle, ShortWindowRejected) {
  const SystemParams p = preset(1.0, 10.0);
  EXPECT_THROW((void)time_domain_correlation(p, SpectrumChannel::fluorescent, 1.0, 100),
               DecayIncomplete);
}

TEST(Oracle, CompareSpectraChecks) {
  const std::vector<double> w = {-1.0, 0.0, 1.0};
  EXPECT_THROW((void)compare_spectra(w, {1, 2, 3}, {-1.0, 0.0}, {1, 2}), GridMismatch);
  EXPECT_THROW((void)compare_spectra(w, {1, 2, 3}, {-1.0, 0.5, 1.0}, {1, 2, 3}), GridMismatch);
  const auto c = compare_spectra(w, {1, 2, 1}, w, {10, 40, 10});
  EXPECT_TRUE(c.scale_warning);
  EXPECT_FALSE(c.warning.empty());
  EXPECT_NEAR(compare_spectra(w, {1, 2, 1}, w, {1, 2.2, 1}).max_relative, 0.2 / 2.2, 1e-15);
}
