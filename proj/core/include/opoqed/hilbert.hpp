#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opoqed/params.hpp"
#include "opoqed/types.hpp"

namespace opoqed {

enum class Atom : std::uint8_t { ground, excited };

/// A ket |atom, n⟩ of the atom ⊗ cavity-mode product space.
struct BasisState {
  Atom atom = Atom::ground;
  int photons = 0;

  [[nodiscard]] constexpr int quanta() const {
    return photons + (atom == Atom::excited ? 1 : 0);
  }
  friend constexpr bool operator==(const BasisState&, const BasisState&) = default;
};

std::string to_string(const BasisState& state);

/// All kets with at most n_max total quanta, ordered by ascending total quanta
/// with the ground-atom ket first inside each shell:
///   |g,0⟩, |g,1⟩, |e,0⟩, |g,2⟩, |e,1⟩, ...
/// The space for n_max is therefore a prefix of the space for any larger n_max,
/// and file outputs index kets by this position.
class StateSpace {
 public:
  explicit StateSpace(int n_max);

  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] Index dim() const { return static_cast<Index>(states_.size()); }
  [[nodiscard]] const std::vector<BasisState>& states() const { return states_; }
  [[nodiscard]] const BasisState& operator[](Index i) const { return states_[static_cast<std::size_t>(i)]; }

  [[nodiscard]] std::optional<Index> find(const BasisState& state) const;
  /// Throws std::out_of_range for kets outside the truncation.
  [[nodiscard]] Index index_of(const BasisState& state) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.n_max_ == b.n_max_; }

 private:
  int n_max_;
  std::vector<BasisState> states_;
};

StateSpace enumerate_basis(int n_max);

Matrix identity(const StateSpace& space);
Matrix annihilation(const StateSpace& space);
Matrix sigma_minus(const StateSpace& space);
/// a†a
Matrix photon_number(const StateSpace& space);
/// σ₊σ₋, the excited-atom projector.
Matrix excitation(const StateSpace& space);
/// Projector onto the kets with exactly n_max total quanta.
Matrix top_shell_projector(const StateSpace& space);

/// H/ħ = iF(a†² − a²) + ig(a†σ₋ − aσ₊) in the frame rotating at the common
/// atom/cavity resonance. Built on a larger space and projected, so every
/// matrix element between retained kets is exact.
Matrix hamiltonian(const SystemParams& params, const StateSpace& space);

}  // namespace opoqed
