#include <cmath>

#include <gtest/gtest.h>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"
#include "opoqed/lindblad.hpp"

using namespace opoqed;

namespace {

SystemParams fig3(int n_max = 2) {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 10.0;
  p.gamma = 1.0;
  p.F = 1e-3;
  p.n_max = n_max;
  return p;
}

// Dissipator written out term by term, independent of the Kronecker assembly.
Matrix apply_direct(const SystemParams& p, const StateSpace& s, const Matrix& rho) {
  const Matrix h = hamiltonian(p, s);
  const Matrix a = annihilation(s), sm = sigma_minus(s);
  const Matrix ad = a.adjoint(), sp = sm.adjoint();
  Matrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
  out += 0.5 * p.gamma * (2.0 * sm * rho * sp - sp * sm * rho - rho * sp * sm);
  out += p.kappa * (2.0 * a * rho * ad - ad * a * rho - rho * ad * a);
  return out;
}

}  // namespace

TEST(Vectorize, ColumnStacking) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const Vector v = vectorize(m);
  EXPECT_EQ(v[vec_index(0, 1, 2)], Complex(2.0));
  EXPECT_EQ(v[vec_index(1, 0, 2)], Complex(3.0));
  EXPECT_TRUE(unvectorize(v, 2).isApprox(m));
  EXPECT_THROW((void)unvectorize(v, 3), DimensionMismatch);
}

TEST(Liouvillian, MatchesTermByTermMasterEquation) {
  const SystemParams p = fig3(3);
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  ASSERT_EQ(l.matrix().rows(), s.dim() * s.dim());
  Matrix rho = Matrix::Random(s.dim(), s.dim());
  rho = rho * rho.adjoint();
  EXPECT_LT((l.apply(rho) - apply_direct(p, s, rho)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Liouvillian, TracePreserving) {
  SystemParams p = fig3(4);
  p.F = 0.3;
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  const Matrix id = identity(s);
  const Vector tr = vectorize(id);
  // tr(L ρ) = 0 for every ρ: the trace functional is a left null vector.
  EXPECT_LT((tr.transpose() * l.matrix()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Liouvillian, SelectedEntries) {
  const SystemParams p = fig3();
  const StateSpace s(2);
  const Superoperator l = build_liouvillian(p, s);
  const Index d = s.dim();
  const Index g0 = 0, g1 = 1, e0 = 2, g2 = 3, e1 = 4;
  auto entry = [&](Index r, Index c, Index rr, Index cc) {
    return l.matrix()(vec_index(r, c, d), vec_index(rr, cc, d));
  };
  // dρ(g0,g2)/dt: decay −2κ (two photons) and drive √2F from ρ(g0,g0).
  EXPECT_NEAR(std::abs(entry(g0, g2, g0, g2) - Complex(-2.0 * p.kappa)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(entry(g0, g2, g0, g0) - Complex(std::sqrt(2.0) * p.F)), 0.0, 1e-14);
  // dρ(g0,e1)/dt decays at γ/2 + κ.
  EXPECT_NEAR(std::abs(entry(g0, e1, g0, e1) - Complex(-(0.5 * p.gamma + p.kappa))), 0.0, 1e-14);
  // Drive out of ρ(g0,g0) into the pair coherences: −√2F per entry, −2√2F for
  // the ρ(g2,g0) and ρ(g0,g2) entries together.
  const Complex pair = entry(g0, g0, g2, g0) + entry(g0, g0, g0, g2);
  EXPECT_NEAR(std::abs(entry(g0, g0, g2, g0) - Complex(-std::sqrt(2.0) * p.F)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(pair - Complex(-2.0 * std::sqrt(2.0) * p.F)), 0.0, 1e-14);
  // Feeding of ρ(g0,g0) by cavity decay from ρ(g1,g1) at 2κ, spontaneous decay from ρ(e0,e0) at γ.
  EXPECT_NEAR(std::abs(entry(g0, g0, g1, g1) - Complex(2.0 * p.kappa)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(entry(g0, g0, e0, e0) - Complex(p.gamma)), 0.0, 1e-14);
}

TEST(SteadyState, PhysicalAndStationary) {
  SystemParams p = fig3(6);
  p.F = 0.1;
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  const DensityMatrix rho = steady_state(l);
  EXPECT_TRUE(rho.is_physical(1e-12));
  EXPECT_LT(steady_state_residual(l, rho), 1e-13);
}

TEST(SteadyState, UndrivenIsVacuum) {
  SystemParams p = fig3(3);
  p.F = 0.0;
  const StateSpace s(p.n_max);
  const DensityMatrix rho = steady_state(build_liouvillian(p, s));
  EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR((rho.matrix() - DensityMatrix::projector(s, {}).matrix()).norm(), 0.0, 1e-14);
}

TEST(SteadyState, DegenerateNullSpace) {
  // γ = g = 0 isolates the excited-atom sector.
  SystemParams p;
  p.kappa = 1.0;
  p.gamma = 0.0;
  p.g = 0.0;
  p.F = 0.05;
  p.n_max = 4;
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  EXPECT_THROW((void)steady_state(l), NonUniqueSteadyState);
  const DensityMatrix rho = steady_state_from_vacuum(l, s);
  EXPECT_TRUE(rho.is_physical(1e-12));
  EXPECT_NEAR(expectation(rho, excitation(s)).real(), 0.0, 1e-15);
  EXPECT_LT(steady_state_residual(l, rho), 1e-13);
}

TEST(Evolve, ApproachesSteadyState) {
  SystemParams p = fig3(4);
  p.F = 0.2;
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  const DensityMatrix rho_ss = steady_state(l);
  const DensityMatrix late = evolve(DensityMatrix::projector(s, {}), l, 20.0, 1e-11);
  EXPECT_LT((late.matrix() - rho_ss.matrix()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(late.trace(), 1.0, 1e-9);
  EXPECT_THROW((void)evolve(rho_ss, l, -1.0), IntegrationFailure);
}

TEST(Expectation, DimensionChecked) {
  const StateSpace s(2), big(3);
  const DensityMatrix rho = DensityMatrix::projector(s, {Atom::ground, 1});
  EXPECT_NEAR(expectation(rho, photon_number(s)).real(), 1.0, 1e-15);
  EXPECT_THROW((void)expectation(rho, photon_number(big)), DimensionMismatch);
}
