#include "opoqed/lindblad.hpp"

#include <cmath>
#include <deque>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include "opoqed/errors.hpp"
#include "opoqed/ode.hpp"

namespace opoqed {

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvectorize(const Vector& v, Index dim) {
  if (v.size() != dim * dim) throw DimensionMismatch("vector length is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

DensityMatrix DensityMatrix::projector(const StateSpace& space, const BasisState& ket) {
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  const Index i = space.index_of(ket);
  m(i, i) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const Vector u = psi / psi.norm();
  return DensityMatrix(u * u.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double tol) const {
  if (m_.rows() != m_.cols() || m_.size() == 0) return false;
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(m_.trace() - Complex(1.0)) > tol) return false;
  return min_eigenvalue() >= -1e-10;
}

Superoperator::Superoperator(Matrix m, Index hilbert_dim) : m_(std::move(m)), d_(hilbert_dim) {
  if (m_.rows() != d_ * d_ || m_.cols() != d_ * d_) {
    throw DimensionMismatch("superoperator must be d^2 x d^2");
  }
}

Matrix Superoperator::apply(const Matrix& rho) const {
  if (rho.rows() != d_ || rho.cols() != d_) throw DimensionMismatch("density matrix size");
  return unvectorize(m_ * vectorize(rho), d_);
}

std::vector<Matrix> jump_operators(const SystemParams& params, const StateSpace& space) {
  return {std::sqrt(2.0 * params.kappa) * annihilation(space),
          std::sqrt(params.gamma) * sigma_minus(space)};
}

Superoperator lindblad_superoperator(const Matrix& h, std::span<const Matrix> jumps) {
  const Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix l = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                    Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const Matrix& c : jumps) {
    if (c.rows() != d || c.cols() != d) throw DimensionMismatch("jump operator size");
    const Matrix cdc = c.adjoint() * c;
    l += Eigen::kroneckerProduct(c.conjugate(), c).eval();
    l -= 0.5 * Eigen::kroneckerProduct(id, cdc).eval();
    l -= 0.5 * Eigen::kroneckerProduct(cdc.transpose(), id).eval();
  }
  return Superoperator(std::move(l), d);
}

Superoperator build_liouvillian(const SystemParams& params, const StateSpace& space) {
  params.validate();
  const auto jumps = jump_operators(params, space);
  return lindblad_superoperator(hamiltonian(params, space), jumps);
}

namespace {

// Solves the restricted system L[idx, idx] x = 0 with tr x = 1, where idx is
// closed under the Liouvillian couplings.
Vector solve_null_with_trace(const Matrix& l, const std::vector<Index>& idx, Index d) {
  const Index n = static_cast<Index>(idx.size());
  Matrix a(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) a(r, c) = l(idx[r], idx[c]);
  }

  // Replace the first population row by the trace functional.
  Index trace_row = -1;
  Vector trace = Vector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    const Index row = idx[k] % d, col = idx[k] / d;
    if (row == col) {
      trace[k] = 1.0;
      if (trace_row < 0) trace_row = k;
    }
  }
  if (trace_row < 0) throw NonUniqueSteadyState("no population in the reachable block");
  a.row(trace_row) = trace.transpose();

  Vector b = Vector::Zero(n);
  b[trace_row] = 1.0;

  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-12);
  if (lu.rank() < n) {
    throw NonUniqueSteadyState("Liouvillian null space has dimension " +
                               std::to_string(n - lu.rank() + 1));
  }
  // Mixed-precision refinement: weak-drive elements sit many decades below
  // ρ(g0,g0), and a working-precision residual cannot resolve them.
  using Wide = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  const Wide a_wide = a.cast<std::complex<long double>>();
  Vector x = lu.solve(b);
  for (int it = 0; it < 3; ++it) {
    const Wide r = b.cast<std::complex<long double>>() - a_wide * x.cast<std::complex<long double>>();
    x += lu.solve(Vector(r.cast<Complex>()));
  }
  return x;
}

DensityMatrix finish(const Vector& vec, Index d) {
  Matrix rho = unvectorize(vec, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

}  // namespace

DensityMatrix steady_state(const Superoperator& liouvillian) {
  const Index d = liouvillian.hilbert_dim();
  std::vector<Index> all(static_cast<std::size_t>(d * d));
  for (Index k = 0; k < d * d; ++k) all[static_cast<std::size_t>(k)] = k;
  return finish(solve_null_with_trace(liouvillian.matrix(), all, d), d);
}

DensityMatrix reachable_steady_state(const Superoperator& liouvillian, const DensityMatrix& seed) {
  const Index d = liouvillian.hilbert_dim();
  const Index n = d * d;
  if (seed.dim() != d) throw DimensionMismatch("seed density matrix size");
  const Matrix& l = liouvillian.matrix();
  const Vector s = vectorize(seed.matrix());

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<Index> queue;
  for (Index k = 0; k < n; ++k) {
    if (s[k] != Complex(0.0)) {
      seen[static_cast<std::size_t>(k)] = 1;
      queue.push_back(k);
    }
  }
  while (!queue.empty()) {
    const Index j = queue.front();
    queue.pop_front();
    for (Index i = 0; i < n; ++i) {
      if (!seen[static_cast<std::size_t>(i)] && l(i, j) != Complex(0.0)) {
        seen[static_cast<std::size_t>(i)] = 1;
        queue.push_back(i);
      }
    }
  }
  std::vector<Index> idx;
  for (Index k = 0; k < n; ++k) {
    if (seen[static_cast<std::size_t>(k)]) idx.push_back(k);
  }

  const Vector sub = solve_null_with_trace(l, idx, d);
  Vector full = Vector::Zero(n);
  for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = sub[static_cast<Index>(k)];
  return finish(full, d);
}

DensityMatrix steady_state_from_vacuum(const Superoperator& liouvillian, const StateSpace& space) {
  try {
    return steady_state(liouvillian);
  } catch (const NonUniqueSteadyState&) {
    return reachable_steady_state(liouvillian, DensityMatrix::projector(space, {Atom::ground, 0}));
  }
}

double steady_state_residual(const Superoperator& liouvillian, const DensityMatrix& rho) {
  return (liouvillian.matrix() * vectorize(rho.matrix())).cwiseAbs().maxCoeff();
}

Complex expectation(const DensityMatrix& rho, const Matrix& op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    throw DimensionMismatch("operator and density matrix dimensions differ");
  }
  return (op * rho.matrix()).trace();
}

DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& liouvillian, double t,
                     double tol) {
  if (rho0.dim() != liouvillian.hilbert_dim()) throw DimensionMismatch("density matrix size");
  if (t < 0.0) throw IntegrationFailure("negative evolution time");
  if (t == 0.0) return rho0;
  const Matrix& l = liouvillian.matrix();
  AdaptiveOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  Vector y = integrate_dopri5([&l](double, const Vector& v) -> Vector { return l * v; },
                              vectorize(rho0.matrix()), 0.0, t, opt);
  return DensityMatrix(unvectorize(y, liouvillian.hilbert_dim()));
}

}  // namespace opoqed
