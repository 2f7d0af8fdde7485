#include "opoqed/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace opoqed {

std::string to_string(const BasisState& state) {
  return std::string("|") + (state.atom == Atom::ground ? "g," : "e,") +
         std::to_string(state.photons) + ">";
}

StateSpace::StateSpace(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  states_.reserve(static_cast<std::size_t>(2 * n_max + 1));
  states_.push_back({Atom::ground, 0});
  for (int q = 1; q <= n_max; ++q) {
    states_.push_back({Atom::ground, q});
    states_.push_back({Atom::excited, q - 1});
  }
}

std::optional<Index> StateSpace::find(const BasisState& state) const {
  if (state.photons < 0 || state.quanta() > n_max_) return std::nullopt;
  if (state.atom == Atom::ground) {
    return state.photons == 0 ? Index{0} : Index{2 * state.photons - 1};
  }
  return Index{2 * state.photons + 2};
}

Index StateSpace::index_of(const BasisState& state) const {
  if (auto i = find(state)) return *i;
  throw std::out_of_range("ket " + to_string(state) + " outside truncation n_max=" +
                          std::to_string(n_max_));
}

StateSpace enumerate_basis(int n_max) { return StateSpace(n_max); }

Matrix identity(const StateSpace& space) {
  return Matrix::Identity(space.dim(), space.dim());
}

Matrix annihilation(const StateSpace& space) {
  Matrix a = Matrix::Zero(space.dim(), space.dim());
  for (Index j = 0; j < space.dim(); ++j) {
    const auto& ket = space[j];
    if (ket.photons == 0) continue;
    const Index i = space.index_of({ket.atom, ket.photons - 1});
    a(i, j) = std::sqrt(static_cast<double>(ket.photons));
  }
  return a;
}

Matrix sigma_minus(const StateSpace& space) {
  Matrix s = Matrix::Zero(space.dim(), space.dim());
  for (Index j = 0; j < space.dim(); ++j) {
    const auto& ket = space[j];
    if (ket.atom != Atom::excited) continue;
    s(space.index_of({Atom::ground, ket.photons}), j) = 1.0;
  }
  return s;
}

Matrix photon_number(const StateSpace& space) {
  Matrix n = Matrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) n(i, i) = space[i].photons;
  return n;
}

Matrix excitation(const StateSpace& space) {
  Matrix p = Matrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    if (space[i].atom == Atom::excited) p(i, i) = 1.0;
  }
  return p;
}

Matrix top_shell_projector(const StateSpace& space) {
  Matrix p = Matrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    if (space[i].quanta() == space.n_max()) p(i, i) = 1.0;
  }
  return p;
}

Matrix hamiltonian(const SystemParams& params, const StateSpace& space) {
  // Two extra quanta are enough: every term changes total quanta by 0 or ±2
  // and each factor by at most one.
  const StateSpace wide(space.n_max() + 2);
  const Matrix a = annihilation(wide);
  const Matrix ad = a.adjoint();
  const Matrix sm = sigma_minus(wide);
  const Matrix sp = sm.adjoint();

  const Matrix h = kI * params.F * (ad * ad - a * a) + kI * params.g * (ad * sm - a * sp);
  return h.topLeftCorner(space.dim(), space.dim());
}

}  // namespace opoqed
