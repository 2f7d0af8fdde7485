#pragma once

#include <string>
#include <vector>

namespace opoqed {

/// Physical rates of the atom + degenerate OPO system and the Fock truncation.
///
/// All rates are angular frequencies in the same (arbitrary) unit; presets use
/// gamma = 1. kappa is the *field* decay rate of the output mirror, so an empty
/// cavity has an intensity linewidth (FWHM) of 2*kappa. F is the effective
/// two-photon drive amplitude of the F(a†² − a²) term.
struct SystemParams {
  double g = 0.0;
  double kappa = 1.0;
  double gamma = 1.0;
  double F = 0.0;
  int n_max = 2;

  /// Throws InvalidParameters unless g >= 0, kappa > 0, gamma >= 0, F >= 0 and
  /// n_max >= 0 (all finite).
  void validate() const;

  /// True when the drive is outside the weak-field regime (F > 0.1 kappa).
  [[nodiscard]] bool weak_field_violated() const { return F > 0.1 * kappa; }

  /// Human readable warnings: weak-field violation and an n_max below the
  /// recommended truncation for this drive.
  [[nodiscard]] std::vector<std::string> warnings() const;
};

/// Truncation sized for the drive: 2 for F/γ <= 0.01, 6 for F/γ <= 0.5 and 10
/// otherwise (F/κ is used when gamma == 0).
int recommended_n_max(double F, double gamma, double kappa);

}  // namespace opoqed
