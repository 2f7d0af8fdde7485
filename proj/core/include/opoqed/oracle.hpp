#pragma once

#include <string>
#include <vector>

#include "opoqed/params.hpp"
#include "opoqed/spectra.hpp"
#include "opoqed/types.hpp"

namespace opoqed {

/// ⟨ΔO₁(0) ΔO₂(τ)⟩ on a uniform τ grid starting at 0.
struct CorrelationSeries {
  double step = 0.0;
  std::vector<double> tau;
  std::vector<Complex> values;
};

/// 30 / min(κ, γ/2), skipping a vanishing γ.
double default_tau_max(const SystemParams& params);
/// Steps so that step <= 1/(20·omega_max) and the estimated trapezoid error
/// stays near 1e-8 of the spectral peak.
int default_tau_steps(const SystemParams& params, double tau_max, double omega_max);

/// Propagates ρ_ss·O₁ (mean removed) with one dense exp(L·h) applied
/// repeatedly and contracts with O₂ at each grid point. Throws DecayIncomplete
/// if |C(tau_max)| > 1e-8·|C(0)|.
CorrelationSeries time_domain_correlation(const SystemParams& params, const Matrix& left_op,
                                          const Matrix& right_op, double tau_max, int n_steps);
/// Transmitted (a†, a) or fluorescent (σ₊, σ₋) incoherent correlation.
CorrelationSeries time_domain_correlation(const SystemParams& params, SpectrumChannel channel,
                                          double tau_max, int n_steps);

/// 2·Re ∫₀^τmax e^{iωτ} C(τ) dτ by the trapezoid rule.
std::vector<double> spectrum_via_transform(const CorrelationSeries& series,
                                           const std::vector<double>& omega);

struct SpectrumComparison {
  double max_relative = 0.0;  // max|a − b| / max(max|a|, max|b|)
  bool scale_warning = false; // peak magnitudes differ by more than 10x
  std::string warning;
};

/// Throws GridMismatch for differently sized or valued grids.
SpectrumComparison compare_spectra(const std::vector<double>& omega_a, const std::vector<double>& a,
                                   const std::vector<double>& omega_b, const std::vector<double>& b);

}  // namespace opoqed
