#pragma once

#include <span>
#include <vector>

#include "opoqed/hilbert.hpp"
#include "opoqed/params.hpp"
#include "opoqed/types.hpp"

namespace opoqed {

/// Density matrices are vectorized by column stacking: vec(ρ)[i + j·d] = ρ(i, j),
/// so vec(A X B) = (Bᵀ ⊗ A) vec(X). Every superoperator consumer uses this.
Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, Index dim);
inline Index vec_index(Index row, Index col, Index dim) { return row + col * dim; }

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}

  static DensityMatrix projector(const StateSpace& space, const BasisState& ket);
  static DensityMatrix pure(const Vector& psi);

  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] Index dim() const { return m_.rows(); }
  [[nodiscard]] Complex operator()(Index i, Index j) const { return m_(i, j); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

  /// Smallest eigenvalue of the Hermitian part.
  [[nodiscard]] double min_eigenvalue() const;
  /// Hermitian within tol, unit trace within tol, eigenvalues >= -1e-10.
  [[nodiscard]] bool is_physical(double tol = 1e-12) const;

 private:
  Matrix m_;
};

class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Matrix m, Index hilbert_dim);

  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] Index hilbert_dim() const { return d_; }
  [[nodiscard]] Matrix apply(const Matrix& rho) const;

 private:
  Matrix m_;
  Index d_ = 0;
};

/// Jump operators of the dissipator, normalized so that the standard form
/// D[c]ρ = cρc† − ½{c†c, ρ} reproduces
///   (γ/2)(2σ₋ρσ₊ − σ₊σ₋ρ − ρσ₊σ₋) + κ(2aρa† − a†aρ − ρa†a),
/// i.e. c_cav = √(2κ)·a and c_spon = √γ·σ₋ (in that order).
std::vector<Matrix> jump_operators(const SystemParams& params, const StateSpace& space);

/// −i[H, ·] + Σ D[c] for arbitrary H and jump operators.
Superoperator lindblad_superoperator(const Matrix& hamiltonian, std::span<const Matrix> jumps);

Superoperator build_liouvillian(const SystemParams& params, const StateSpace& space);

/// Null vector of the Liouvillian with unit trace. One row of L is replaced by
/// the trace functional and the system solved by full-pivot LU.
/// Throws NonUniqueSteadyState if the null space has dimension > 1.
DensityMatrix steady_state(const Superoperator& liouvillian);

/// Steady state of the sub-block reachable from `seed` through nonzero
/// Liouvillian couplings; well defined even when the full null space is
/// degenerate (e.g. an isolated excited sector at γ = g = 0).
DensityMatrix reachable_steady_state(const Superoperator& liouvillian, const DensityMatrix& seed);

/// steady_state, or reachable_steady_state seeded by |g,0⟩ when the full
/// null space is degenerate.
DensityMatrix steady_state_from_vacuum(const Superoperator& liouvillian, const StateSpace& space);

/// ∞-norm of L(ρ).
double steady_state_residual(const Superoperator& liouvillian, const DensityMatrix& rho);

/// tr(op·ρ). Throws DimensionMismatch.
Complex expectation(const DensityMatrix& rho, const Matrix& op);

/// ρ(t) from the vectorized master equation by adaptive Dormand–Prince
/// integration with local error tolerance `tol`.
DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& liouvillian, double t,
                     double tol = 1e-10);

}  // namespace opoqed
