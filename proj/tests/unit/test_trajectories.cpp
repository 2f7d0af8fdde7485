#include <cmath>
#include <set>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"
#include "opoqed/lindblad.hpp"
#include "opoqed/trajectories.hpp"

using namespace opoqed;

namespace {

SystemParams fig16() {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 10.0;
  p.gamma = 1.0;
  p.F = 0.1;
  p.n_max = 6;
  return p;
}

SystemParams busy() {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 1.0;
  p.gamma = 1.0;
  p.F = 0.2;
  p.n_max = 14;
  return p;
}

// Master-equation reference for the photon number along the ensemble grid.
std::vector<double> master_photon(const SystemParams& p, const std::vector<double>& times) {
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  const Matrix n = photon_number(s);
  std::vector<double> out;
  DensityMatrix rho = DensityMatrix::projector(s, {});
  double t = 0.0;
  for (double ti : times) {
    if (ti > t) rho = evolve(rho, l, ti - t, 1e-12);
    t = ti;
    out.push_back(expectation(rho, n).real());
  }
  return out;
}

}  // namespace

TEST(Rng, DeterministicAndOpenInterval) {
  TrajectoryRng a(7, 3), b(7, 3), c(7, 4);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
    differs = differs || x != c.uniform();
  }
  EXPECT_TRUE(differs);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(TrajectoryRng::derive(1, i));
  EXPECT_EQ(seeds.size(), 1000u);
}

TEST(Trajectory, EffectiveHamiltonian) {
  const SystemParams p = fig16();
  const StateSpace s(p.n_max);
  const Matrix h = effective_hamiltonian(p, s);
  const Matrix anti = Complex(0.0, 0.5) * (h - h.adjoint());
  const Matrix want = p.kappa * photon_number(s) + 0.5 * p.gamma * excitation(s);
  EXPECT_LT((anti - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Trajectory, NoJumpDriftIsExactPropagator) {
  const SystemParams p = fig16();
  const StateSpace s(p.n_max);
  TrajectoryOptions o;
  o.t_max = 0.8;
  o.sample_dt = 0.1;
  o.allow_jumps = false;
  const TrajectoryRecord r = run_trajectory(p, o);
  ASSERT_EQ(r.times.size(), 9u);
  EXPECT_TRUE(r.jump_log.empty());
  const Matrix h = effective_hamiltonian(p, s);
  const Matrix n = photon_number(s);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const Matrix u = (Complex(0.0, -r.times[k]) * h).exp();
    const Vector psi = u.col(0);
    const double want = (psi.adjoint() * n * psi)(0, 0).real() / psi.squaredNorm();
    EXPECT_NEAR(r.photon_number[k], want, 1e-12);
  }
}

TEST(Trajectory, ReproducibleAndRecordsJumps) {
  const SystemParams p = busy();
  const TrajectoryRecord a = run_trajectory(p, 20.0, 11, 0.05);
  const TrajectoryRecord b = run_trajectory(p, 20.0, 11, 0.05);
  EXPECT_EQ(a.photon_number, b.photon_number);
  ASSERT_FALSE(a.jump_log.empty());
  double last = 0.0;
  for (const JumpEvent& e : a.jump_log) {
    EXPECT_GE(e.time, last);
    EXPECT_LE(e.time, 20.0);
    last = e.time;
  }
  EXPECT_GE(a.max_photon_number(), a.photon_number.front());
}

TEST(Trajectory, TruncationGuard) {
  SystemParams p = busy();
  p.n_max = 2;
  p.F = 0.9;
  EXPECT_THROW((void)run_trajectory(p, 5.0, 1, 0.1), TruncationOverflow);
}

TEST(Ensemble, IndependentOfThreadCount) {
  const SystemParams p = busy();
  EnsembleOptions o;
  o.t_max = 2.0;
  o.sample_dt = 0.25;
  o.seed = 5;
  o.threads = 1;
  const EnsembleResult one = ensemble_average(p, 300, o);
  o.threads = 4;
  const EnsembleResult four = ensemble_average(p, 300, o);
  EXPECT_EQ(one.mean_photon, four.mean_photon);
  EXPECT_EQ(one.se_photon, four.se_photon);
  EXPECT_EQ(one.cavity_jumps, four.cavity_jumps);
}

TEST(Ensemble, AgreesWithMasterEquation) {
  const SystemParams p = busy();
  EnsembleOptions o;
  o.t_max = 2.0;
  o.sample_dt = 0.25;
  o.seed = 2;
  o.keep_density = true;
  const EnsembleResult e = ensemble_average(p, 8000, o);
  const auto ref = master_photon(p, e.times);
  for (std::size_t k = 1; k < e.times.size(); ++k) {
    ASSERT_GT(e.se_photon[k], 0.0);
    EXPECT_LT(std::abs(e.mean_photon[k] - ref[k]), 4.0 * e.se_photon[k]) << e.times[k];
  }
  ASSERT_EQ(e.mean_density.size(), e.times.size());
  EXPECT_NEAR(e.mean_density.back().trace().real(), 1.0, 1e-12);
  EXPECT_GT(e.cavity_jumps, 0u);
  EXPECT_GT(e.spontaneous_jumps, 0u);
}

TEST(Conditioned, StartsNearOnePhoton) {
  const TrajectoryRecord r = conditioned_after_emission(fig16(), 0.5, 0.01);
  ASSERT_FALSE(r.photon_number.empty());
  EXPECT_NEAR(r.photon_number.front(), 1.0, 0.05);
  EXPECT_GE(r.max_photon_number(), 0.9);
  EXPECT_NEAR(r.times.back(), 0.5, 1e-12);
}

// Large-ensemble check of the unraveling at the weak-drive preset, where
// jumps are rare and a small ensemble cannot resolve the mean.
TEST(EnsembleReference, MillionTrajectoriesAtWeakDrive) {
  const SystemParams p = fig16();
  EnsembleOptions o;
  o.t_max = 1.0;
  o.sample_dt = 0.05;
  o.seed = 1;
  const EnsembleResult e = ensemble_average(p, 1000000, o);
  const auto ref = master_photon(p, e.times);
  for (std::size_t k = 1; k < e.times.size(); ++k) {
    EXPECT_LT(std::abs(e.mean_photon[k] - ref[k]), 3.0 * e.se_photon[k]) << e.times[k];
  }
}

TEST(Conditioned, EmptyCavityLimitIsOnePhoton) {
  SystemParams p = fig16();
  p.g = 0.0;
  p.F = 1e-4;
  p.n_max = 4;
  const TrajectoryRecord r = conditioned_after_emission(p, 0.1, 0.01);
  EXPECT_NEAR(r.photon_number.front(), 1.0, 1e-6);
}
