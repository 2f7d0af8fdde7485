#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opoqed/lindblad.hpp"
#include "opoqed/params.hpp"
#include "opoqed/types.hpp"
#include "opoqed/weakfield.hpp"

namespace opoqed {

/// Regression channels. A: ⟨Δa†(0)Δa(τ)⟩, B: ⟨Δa†(0)Δa†(τ)⟩,
/// C: ⟨Δσ₊(0)Δσ₋(τ)⟩, D: ⟨Δσ₊(0)Δσ₊(τ)⟩.
enum class Channel { A, B, C, D };
const char* to_string(Channel c);

/// Where the fixed-time operator X sits relative to the evolved one Y.
///   zero_then_tau: ⟨X(0) Y(τ)⟩ = tr{Y e^{Lτ}[ρX]}
///   tau_then_zero: ⟨Y(τ) X(0)⟩ = tr{Y e^{Lτ}[Xρ]}
enum class Ordering { zero_then_tau, tau_then_zero };

/// C(τ) = readoutᵀ · exp(evolution·τ) · initial  (plain transpose, no conjugate).
struct RegressionSystem {
  Matrix evolution;
  Vector initial;
  Vector readout;

  [[nodiscard]] Complex correlation_at_zero() const { return readout.transpose() * initial; }
  /// Largest real part over the spectrum of `evolution`.
  [[nodiscard]] double spectral_abscissa() const;
};

/// Fluctuation correlation ⟨ΔX ΔY⟩ through the full superoperator. The
/// evolution is L with its stationary mode shifted to −shift (the initial
/// vector is traceless so the dynamics are unchanged), keeping the resolvent
/// regular at ω = 0.
RegressionSystem correlation_system(const Superoperator& liouvillian, const DensityMatrix& rho_ss,
                                    const Matrix& x, const Matrix& y, Ordering ordering);

/// General path for one of the four printed channels at params.n_max.
/// Throws ChannelUnavailable if n_max < 2.
RegressionSystem regression_system(const SystemParams& params, Channel channel,
                                   const DensityMatrix& rho_ss);

/// The 8x8 weak-field regression matrix with the printed entries, element order
///   (g0,e0) (g0,g1) (g1,g0) (e1,e0) (g2,g1) (e0,g0) (e1,g1) (g2,e0).
Matrix regression_matrix_paper(const SystemParams& params);
/// Same ordering, cut from the n_max = 2 Liouvillian (the reference matrix).
Matrix regression_matrix_lowest_order(const SystemParams& params);

/// Weak-field 8-dimensional system seeded from the reduced steady state.
/// `printed` selects regression_matrix_paper instead of the reference matrix.
RegressionSystem weakfield_regression_system(const SystemParams& params, Channel channel,
                                         const WeakFieldState& state, bool printed = false);

/// R(ω) = ∫₀^∞ e^{iωτ} C(τ) dτ = readoutᵀ (−iω − M)⁻¹ initial.
/// Small systems use one eigendecomposition reused over all ω, spot-checked
/// against direct solves. Large systems, and those whose eigenbasis fails the
/// check, use a Hessenberg reduction with an O(n²) solve per frequency.
class Resolvent {
 public:
  explicit Resolvent(RegressionSystem system);

  [[nodiscard]] Complex operator()(double omega) const;
  [[nodiscard]] Complex direct(double omega) const;
  [[nodiscard]] std::vector<Complex> evaluate(const std::vector<double>& omega) const;
  [[nodiscard]] bool uses_eigenbasis() const { return eigen_ok_; }

  /// Largest dimension handled through the eigenbasis.
  static constexpr Index kEigenLimit = 256;

 private:
  void prepare_hessenberg();
  [[nodiscard]] Complex hessenberg_solve(double omega) const;

  RegressionSystem sys_;
  Vector lambda_, left_, right_;
  Matrix hess_;
  Vector hess_left_, hess_right_;
  double scale_ = 1.0;
  bool eigen_ok_ = false;
};

/// 2·Re R(ω) over the grid.
std::vector<double> resolvent_spectrum(const RegressionSystem& system,
                                       const std::vector<double>& omega);
std::vector<double> resolvent_spectrum_direct(const RegressionSystem& system,
                                              const std::vector<double>& omega);

/// Uniform, exactly antisymmetric grid on [−omega_max, omega_max].
struct FrequencyGrid {
  double omega_max = 1.0;
  int points = 4001;
  [[nodiscard]] std::vector<double> values() const;
  [[nodiscard]] double spacing() const { return 2.0 * omega_max / (points - 1); }
};

/// The narrowest positive rate among κ and γ.
double narrowest_width(const SystemParams& params);
/// Ω = 4·max(g, κ, γ), with enough points for spacing <= narrowest_width/20.
FrequencyGrid default_frequency_grid(const SystemParams& params);
/// Throws InsufficientGrid if spacing > narrowest_width/20 or points < 3.
void check_grid_resolution(const FrequencyGrid& grid, const SystemParams& params);

enum class SpectrumChannel { transmitted, fluorescent };
const char* to_string(SpectrumChannel c);

struct SpectrumTable {
  SpectrumChannel channel = SpectrumChannel::transmitted;
  std::vector<double> omega;
  std::vector<double> incoherent;
  std::vector<double> squeeze_0;
  std::vector<double> squeeze_90;
  /// incoherent / max(incoherent); zero when the spectrum vanishes.
  [[nodiscard]] std::vector<double> normalized() const;
};

SpectrumTable transmitted_spectrum(const SystemParams& params, const FrequencyGrid& grid);
SpectrumTable fluorescent_spectrum(const SystemParams& params, const FrequencyGrid& grid);
/// Incoherent spectrum through the weak-field 8-dimensional system.
std::vector<double> weakfield_incoherent_spectrum(const SystemParams& params, SpectrumChannel channel,
                                                  const std::vector<double>& omega,
                                                  bool printed = false);

/// General superoperator path against the 8-dimensional weak-field path.
/// The two differ at relative order F², so besides the raw deviation at
/// params.F both are divided by F² and extrapolated to F → 0 from F and F/2.
struct DualPathReport {
  double raw = 0.0;
  double extrapolated = 0.0;
};
/// `tamper`, when set, edits the 8-dimensional evolution matrix first (fault
/// injection for the validation tooling).
DualPathReport compare_regression_paths(const SystemParams& params, SpectrumChannel channel,
                                        const std::vector<double>& omega, bool printed = false,
                                        const std::function<void(Matrix&)>& tamper = {});

struct SqueezeIdentityReport {
  bool degenerate = false;
  double constant = 0.0;     // c in incoherent ≈ c·(S0 + S90)
  double residual = 0.0;     // max|I − c(S0+S90)| / max|I|
  double cancellation = 0.0; // max|S0 + S90| / max|S0|
};
SqueezeIdentityReport squeezing_identity_check(const SpectrumTable& table);

}  // namespace opoqed
