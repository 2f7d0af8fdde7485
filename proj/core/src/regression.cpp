#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"
#include "opoqed/spectra.hpp"

namespace opoqed {
namespace {

constexpr BasisState g0{Atom::ground, 0}, g1{Atom::ground, 1}, e0{Atom::excited, 0},
    g2{Atom::ground, 2}, e1{Atom::excited, 1};

// Element order of the 8-dimensional weak-field system.
constexpr std::array<std::pair<BasisState, BasisState>, 8> kReduced = {{
    {g0, e0}, {g0, g1}, {g1, g0}, {e1, e0}, {g2, g1}, {e0, g0}, {e1, g1}, {g2, e0}}};

int quanta_difference(std::size_t k) {
  return kReduced[k].first.quanta() - kReduced[k].second.quanta();
}

}  // namespace

const char* to_string(Channel c) {
  switch (c) {
    case Channel::A: return "A";
    case Channel::B: return "B";
    case Channel::C: return "C";
    case Channel::D: return "D";
  }
  return "?";
}

double RegressionSystem::spectral_abscissa() const {
  if (evolution.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::ComplexEigenSolver<Matrix> es(evolution, false);
  return es.eigenvalues().real().maxCoeff();
}

RegressionSystem correlation_system(const Superoperator& liouvillian, const DensityMatrix& rho_ss,
                                    const Matrix& x, const Matrix& y, Ordering ordering) {
  const Index d = liouvillian.hilbert_dim();
  if (rho_ss.dim() != d || x.rows() != d || x.cols() != d || y.rows() != d || y.cols() != d) {
    throw DimensionMismatch("correlation operands do not match the Liouvillian");
  }
  const Matrix& rho = rho_ss.matrix();
  const Complex mean_x = (x * rho).trace();
  const Matrix seeded = ordering == Ordering::zero_then_tau ? Matrix(rho * x) : Matrix(x * rho);

  RegressionSystem sys;
  sys.initial = vectorize(seeded - mean_x * rho);
  // tr(Y·Z) = Σ_ij Y_ji Z_ij = vec(Yᵀ)·vec(Z)
  sys.readout = vectorize(y.transpose());

  const Matrix& l = liouvillian.matrix();
  const double shift = std::max(l.diagonal().cwiseAbs().maxCoeff(), 1.0);
  Vector trace_row = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) trace_row[vec_index(i, i, d)] = 1.0;
  sys.evolution = l - shift * vectorize(rho) * trace_row.transpose();
  return sys;
}

RegressionSystem regression_system(const SystemParams& params, Channel channel,
                                   const DensityMatrix& rho_ss) {
  if (params.n_max < 2) throw ChannelUnavailable("regression channels need n_max >= 2");
  const StateSpace space(params.n_max);
  const Superoperator l = build_liouvillian(params, space);
  const Matrix a = annihilation(space);
  const Matrix sm = sigma_minus(space);
  switch (channel) {
    case Channel::A: return correlation_system(l, rho_ss, a.adjoint(), a, Ordering::zero_then_tau);
    case Channel::B: return correlation_system(l, rho_ss, a.adjoint(), a.adjoint(), Ordering::zero_then_tau);
    case Channel::C: return correlation_system(l, rho_ss, sm.adjoint(), sm, Ordering::zero_then_tau);
    case Channel::D: return correlation_system(l, rho_ss, sm.adjoint(), sm.adjoint(), Ordering::zero_then_tau);
  }
  throw ChannelUnavailable("unknown channel");
}

Matrix regression_matrix_paper(const SystemParams& params) {
  const double g = params.g, k = params.kappa, y = params.gamma, f = params.F;
  const double s2 = std::sqrt(2.0);
  Eigen::Matrix<double, 8, 8> m;
  // clang-format off
  m <<  -y/2,    -g,   0,       0,       0,     0,           0,           0,
           g,    -k,   0,       0,       0,     0,           0,           0,
           0,  s2*f,  -k,       y,  2*s2*k,     g,           0,           0,
           0,     0,   0, -(y + k),       0,     0,          -g,       -s2*g,
           0,     0,   0,       0,    -3*k,     0,        s2*g,           g,
           0,     0,  -g,       0,       0,  -y/2,         2*k,           0,
           0,     0,   0,       g,   -s2*g,     0, -(y/2 + 2*k),          0,
        s2*f,     0,   0,    s2*g,      -g,     0,           0, -(y/2 + 2*k);
  // clang-format on
  return m.cast<Complex>();
}

Matrix regression_matrix_lowest_order(const SystemParams& params) {
  SystemParams p = params;
  p.n_max = 2;
  const StateSpace space(2);
  const Matrix l = build_liouvillian(p, space).matrix();
  Matrix m(8, 8);
  for (std::size_t r = 0; r < 8; ++r) {
    const Index lr = vec_index(space.index_of(kReduced[r].first), space.index_of(kReduced[r].second), space.dim());
    for (std::size_t c = 0; c < 8; ++c) {
      const Index lc = vec_index(space.index_of(kReduced[c].first), space.index_of(kReduced[c].second), space.dim());
      // Order-F² elements feeding back into the order-F ones only enter at F³.
      const bool higher_order = quanta_difference(r) < 0 && quanta_difference(c) > 0;
      m(static_cast<Index>(r), static_cast<Index>(c)) = higher_order ? Complex{} : l(lr, lc);
    }
  }
  return m;
}

RegressionSystem weakfield_regression_system(const SystemParams& params, Channel channel,
                                         const WeakFieldState& s, bool printed) {
  const double s2 = std::sqrt(2.0);
  RegressionSystem sys;
  sys.evolution = printed ? regression_matrix_paper(params) : regression_matrix_lowest_order(params);
  sys.initial = Vector::Zero(8);
  sys.readout = Vector::Zero(8);
  if (channel == Channel::A || channel == Channel::B) {
    // ρ·a†
    sys.initial << s.c01p, s2 * s.c02, s.p1, s.pe1, s2 * s.p2, s.ce1, s2 * s.c12, std::conj(s.c12);
  } else {
    // ρ·σ₊
    sys.initial << 0.0, s.c01p, std::conj(s.ce1), 0.0, std::conj(s.c12), s.pe0, s.pe1, 0.0;
  }
  switch (channel) {
    case Channel::A: sys.readout << 0, 0, 1, 1, s2, 0, 0, 0; break;  // tr(a·)
    case Channel::B: sys.readout << 0, 1, 0, 0, 0, 0, 0, 0; break;   // tr(a†·)
    case Channel::C: sys.readout << 0, 0, 0, 0, 0, 1, 1, 0; break;   // tr(σ₋·)
    case Channel::D: sys.readout << 1, 0, 0, 0, 0, 0, 0, 0; break;   // tr(σ₊·)
  }
  return sys;
}

Resolvent::Resolvent(RegressionSystem system) : sys_(std::move(system)) {
  const Index n = sys_.evolution.rows();
  if (n != sys_.evolution.cols() || sys_.initial.size() != n || sys_.readout.size() != n) {
    throw DimensionMismatch("regression system shapes");
  }
  if (n == 0) return;
  scale_ = std::max(sys_.evolution.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  if (n > kEigenLimit) {
    prepare_hessenberg();
    return;
  }
  Eigen::ComplexEigenSolver<Matrix> es(sys_.evolution);
  if (es.info() != Eigen::Success) {
    prepare_hessenberg();
    return;
  }
  lambda_ = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  Eigen::FullPivLU<Matrix> lu(v);
  if (!lu.isInvertible()) {
    prepare_hessenberg();
    return;
  }
  right_ = lu.solve(sys_.initial);
  left_ = (sys_.readout.transpose() * v).transpose();
  scale_ = std::max(lambda_.cwiseAbs().maxCoeff(), 1e-300);

  // Spot check against direct solves, including on top of the poles that
  // dominate the line shape (largest residue over linewidth).
  std::vector<double> probe = {0.0, 0.1 * scale_, 0.5 * scale_, -scale_, 2.0 * scale_};
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto height = [&](Index k) {
    return std::abs(left_[k] * right_[k]) / std::max(std::abs(lambda_[k].real()), 1e-300);
  };
  const std::size_t keep = std::min<std::size_t>(order.size(), 16);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](Index a, Index b) { return height(a) > height(b); });
  for (std::size_t k = 0; k < keep; ++k) probe.push_back(lambda_[order[k]].imag());
  eigen_ok_ = true;
  std::vector<Complex> fast, slow;
  double peak = 0.0;
  for (double w : probe) {
    try {
      const Complex d = direct(w);
      fast.push_back((*this)(w));
      slow.push_back(d);
      peak = std::max(peak, std::abs(d));
    } catch (const SingularResolvent&) {
      // a pole on the axis; evaluation there throws later
    }
  }
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (std::abs(fast[i] - slow[i]) > 1e-10 * peak) {
      eigen_ok_ = false;
      break;
    }
  }
  if (!eigen_ok_) prepare_hessenberg();
}

void Resolvent::prepare_hessenberg() {
  eigen_ok_ = false;
  Eigen::HessenbergDecomposition<Matrix> hd(sys_.evolution);
  hess_ = hd.matrixH();
  const Matrix q = hd.matrixQ();
  hess_right_ = q.adjoint() * sys_.initial;
  hess_left_ = q.transpose() * sys_.readout;
}

Complex Resolvent::hessenberg_solve(double omega) const {
  const Index n = hess_.rows();
  Matrix a = -hess_;
  a.diagonal().array() += Complex(0.0, -omega);
  Vector b = hess_right_;
  // Only the first subdiagonal is nonzero, so pivoting swaps adjacent rows.
  for (Index k = 0; k + 1 < n; ++k) {
    if (std::abs(a(k + 1, k)) > std::abs(a(k, k))) {
      a.row(k).tail(n - k).swap(a.row(k + 1).tail(n - k));
      std::swap(b[k], b[k + 1]);
    }
    if (a(k + 1, k) == Complex(0.0)) continue;
    const Complex f = a(k + 1, k) / a(k, k);
    a.row(k + 1).tail(n - k) -= f * a.row(k).tail(n - k);
    b[k + 1] -= f * b[k];
  }
  const double floor = 1e-14 * scale_;
  for (Index k = 0; k < n; ++k) {
    if (!(std::abs(a(k, k)) > floor)) {
      throw SingularResolvent("resolvent is singular near omega = " + std::to_string(omega));
    }
  }
  const Vector y = a.triangularView<Eigen::Upper>().solve(b);
  return hess_left_.transpose() * y;
}

Complex Resolvent::direct(double omega) const {
  const Index n = sys_.evolution.rows();
  if (n == 0) return {};
  const Matrix a = Complex(0.0, -omega) * Matrix::Identity(n, n) - sys_.evolution;
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw SingularResolvent("resolvent is singular near omega = " + std::to_string(omega));
  }
  return sys_.readout.transpose() * lu.solve(sys_.initial);
}

Complex Resolvent::operator()(double omega) const {
  if (!eigen_ok_) return hessenberg_solve(omega);
  const Complex z(0.0, -omega);
  Complex sum{};
  for (Index k = 0; k < lambda_.size(); ++k) {
    const Complex den = z - lambda_[k];
    if (std::abs(den) < 1e-13 * scale_) {
      throw SingularResolvent("resolvent pole on the real frequency axis at omega = " +
                              std::to_string(omega));
    }
    sum += left_[k] * right_[k] / den;
  }
  return sum;
}

std::vector<Complex> Resolvent::evaluate(const std::vector<double>& omega) const {
  std::vector<Complex> out;
  out.reserve(omega.size());
  for (double w : omega) out.push_back((*this)(w));
  return out;
}

std::vector<double> resolvent_spectrum(const RegressionSystem& system,
                                       const std::vector<double>& omega) {
  const Resolvent r(system);
  std::vector<double> out;
  out.reserve(omega.size());
  for (double w : omega) out.push_back(2.0 * r(w).real());
  return out;
}

std::vector<double> resolvent_spectrum_direct(const RegressionSystem& system,
                                              const std::vector<double>& omega) {
  const Resolvent r(system);
  std::vector<double> out;
  out.reserve(omega.size());
  for (double w : omega) out.push_back(2.0 * r.direct(w).real());
  return out;
}

}  // namespace opoqed
