#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opoqed/lindblad.hpp"
#include "opoqed/params.hpp"
#include "opoqed/types.hpp"

namespace opoqed {

/// The nine density-matrix elements that survive at lowest order in F.
/// Naming: p* are populations, c* coherences; "e" marks the excited atom.
///   p00 = ⟨g0|ρ|g0⟩   pe0 = ⟨e0|ρ|e0⟩   p1 = ⟨g1|ρ|g1⟩   pe1 = ⟨e1|ρ|e1⟩
///   p2  = ⟨g2|ρ|g2⟩   c01p = ⟨g0|ρ|e1⟩  c02 = ⟨g0|ρ|g2⟩  ce1 = ⟨e0|ρ|g1⟩
///   c12 = ⟨e1|ρ|g2⟩
struct WeakFieldState {
  Complex p00{1.0}, pe0, p1, pe1, p2, c01p, c02, ce1, c12;

  static constexpr std::array<std::string_view, 9> kNames = {
      "p00", "pe0", "p1", "pe1", "p2", "c01p", "c02", "ce1", "c12"};

  [[nodiscard]] Complex get(std::string_view name) const;
  [[nodiscard]] std::array<Complex, 9> values() const {
    return {p00, pe0, p1, pe1, p2, c01p, c02, ce1, c12};
  }

  /// Reads the nine elements out of a full density matrix (n_max >= 2).
  static WeakFieldState from_density(const DensityMatrix& rho, const StateSpace& space);
  /// Hermitian n_max = 2 density matrix holding only these elements.
  [[nodiscard]] DensityMatrix to_density() const;
};

/// Lowest-order steady state: the order-F block (c02, c01p) driven by the
/// vacuum through √2·F, then the order-F² block driven by those coherences.
/// Both blocks are cut out of the n_max = 2 Liouvillian, not transcribed.
/// Throws SingularSystem when either block is singular (κ = 0, or γ = g = 0).
WeakFieldState weakfield_steady_state(const SystemParams& params);

struct ElementScaling {
  std::string name;
  int expected = 0;              // 1 or 2
  std::optional<double> fitted;  // empty when the element vanishes identically
  [[nodiscard]] bool present() const { return fitted.has_value(); }
  [[nodiscard]] bool within(double tol) const {
    return fitted && std::abs(*fitted - expected) <= tol;
  }
};

struct ScalingReport {
  std::vector<double> drives;
  std::vector<ElementScaling> elements;  // eight non-unit elements

  /// Every present element within tol of its expected exponent.
  [[nodiscard]] bool all_within(double tol = 0.05) const;
  [[nodiscard]] const ElementScaling& element(std::string_view name) const;
  [[nodiscard]] std::string to_json() const;
};

/// Least-squares slope of log|element| against log F over `drives`, using the
/// full steady state at params.n_max. Throws InsufficientGrid unless there are
/// >= 3 positive drives spanning at least one decade.
ScalingReport verify_scalings(const SystemParams& params, const std::vector<double>& drives);

}  // namespace opoqed
