#include "opoqed/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "opoqed/errors.hpp"

namespace opoqed {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<double> sample_times(double t_max, double dt) {
  if (!(t_max > 0.0) || !(dt > 0.0)) throw InvalidParameters("t_max and sample_dt must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = std::min(static_cast<double>(k) * dt, t_max);
  return t;
}

// Everything a trajectory needs that depends only on the parameters.
struct Unraveling {
  StateSpace space;
  Matrix generator;  // −i H_eff
  Matrix step;       // exp(generator·dt)
  std::vector<Matrix> jumps;
  Matrix number, excited, top;
  double dt;

  Unraveling(const SystemParams& params, double sample_dt)
      : space(params.n_max),
        generator(-kI * effective_hamiltonian(params, space)),
        step((generator * sample_dt).exp()),
        jumps(jump_operators(params, space)),
        number(photon_number(space)),
        excited(excitation(space)),
        top(top_shell_projector(space)),
        dt(sample_dt) {}

  [[nodiscard]] Vector drift(const Vector& psi, double s) const {
    if (s == dt) return step * psi;
    return Matrix((generator * s).exp()) * psi;
  }
};

void record_sample(const Unraveling& u, const Vector& psi, double t, double overflow,
                   TrajectoryRecord& rec) {
  const double norm = psi.squaredNorm();
  const double top = (u.top * psi).squaredNorm() / norm;
  if (top > overflow) {
    throw TruncationOverflow("top shell population " + std::to_string(top) + " at t = " +
                             std::to_string(t) + "; raise n_max");
  }
  rec.times.push_back(t);
  rec.photon_number.push_back(psi.dot(u.number * psi).real() / norm);
  rec.excitation.push_back(psi.dot(u.excited * psi).real() / norm);
}

TrajectoryRecord unravel(const Unraveling& u, const TrajectoryOptions& opt,
                         std::vector<Vector>* states) {
  TrajectoryRng rng(opt.seed, opt.index);
  Vector psi;
  if (opt.initial) {
    if (opt.initial->size() != u.space.dim()) throw DimensionMismatch("initial state size");
    psi = opt.initial->normalized();
  } else {
    psi = Vector::Zero(u.space.dim());
    psi[0] = 1.0;
  }

  const std::vector<double> times = sample_times(opt.t_max, opt.sample_dt);
  TrajectoryRecord rec;
  rec.times.reserve(times.size());
  record_sample(u, psi, 0.0, opt.overflow_threshold, rec);
  if (states) states->push_back(psi.normalized());

  double threshold = rng.uniform();
  for (std::size_t k = 1; k < times.size(); ++k) {
    double now = times[k - 1];
    double remaining = times[k] - times[k - 1];
    bool whole = true;
    while (remaining > 0.0) {
      const bool full_step = whole && std::abs(remaining - u.dt) <= 1e-12 * u.dt;
      Vector trial = full_step ? Vector(u.step * psi) : u.drift(psi, remaining);
      if (!opt.allow_jumps || trial.squaredNorm() > threshold) {
        psi = std::move(trial);
        break;
      }
      // The squared norm is monotone in s, so bisect for the crossing.
      double lo = 0.0, hi = remaining, s = remaining;
      Vector at = trial;
      for (int it = 0; it < 200; ++it) {
        s = 0.5 * (lo + hi);
        at = u.drift(psi, s);
        const double n = at.squaredNorm();
        if (std::abs(n - threshold) <= opt.norm_tolerance) break;
        (n > threshold ? lo : hi) = s;
        if (hi - lo <= 1e-15 * std::max(1.0, now)) break;
      }
      std::vector<double> weight(u.jumps.size());
      double total = 0.0;
      for (std::size_t c = 0; c < u.jumps.size(); ++c) {
        weight[c] = (u.jumps[c] * at).squaredNorm();
        total += weight[c];
      }
      const double pick = rng.uniform() * total;
      std::size_t chosen = 0;
      double acc = weight[0];
      while (chosen + 1 < weight.size() && pick > acc) acc += weight[++chosen];
      psi = (u.jumps[chosen] * at).normalized();
      now += s;
      rec.jump_log.push_back({now, chosen == 0 ? JumpChannel::cavity : JumpChannel::spontaneous});
      remaining -= s;
      whole = false;
      threshold = rng.uniform();
    }
    record_sample(u, psi, times[k], opt.overflow_threshold, rec);
    if (states) states->push_back(psi.normalized());
  }
  return rec;
}

}  // namespace

const char* to_string(JumpChannel c) {
  return c == JumpChannel::cavity ? "cavity" : "spontaneous";
}

double TrajectoryRecord::max_photon_number() const {
  return photon_number.empty() ? 0.0 : *std::max_element(photon_number.begin(), photon_number.end());
}

Matrix effective_hamiltonian(const SystemParams& params, const StateSpace& space) {
  params.validate();
  return hamiltonian(params, space) - kI * params.kappa * photon_number(space) -
         kI * (0.5 * params.gamma) * excitation(space);
}

std::uint64_t TrajectoryRng::derive(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

TrajectoryRng::TrajectoryRng(std::uint64_t seed, std::uint64_t index)
    : engine_(derive(seed, index)) {}

double TrajectoryRng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

TrajectoryRecord run_trajectory(const SystemParams& params, const TrajectoryOptions& options) {
  params.validate();
  const Unraveling u(params, options.sample_dt);
  return unravel(u, options, nullptr);
}

TrajectoryRecord run_trajectory(const SystemParams& params, double t_max, std::uint64_t seed,
                                double sample_dt) {
  TrajectoryOptions opt;
  opt.t_max = t_max;
  opt.seed = seed;
  opt.sample_dt = sample_dt;
  return run_trajectory(params, opt);
}

EnsembleResult ensemble_average(const SystemParams& params, std::size_t n_traj,
                                const EnsembleOptions& options) {
  if (n_traj < 1) throw InvalidParameters("n_traj must be >= 1");
  params.validate();
  const Unraveling u(params, options.sample_dt);
  const std::vector<double> times = sample_times(options.t_max, options.sample_dt);
  const std::size_t nt = times.size();
  const Index d = u.space.dim();

  struct Block {
    std::vector<double> n1, n2, e1, e2;
    std::vector<Matrix> rho;
    std::size_t cavity = 0, spontaneous = 0;
  };
  constexpr std::size_t kBlock = 64;
  const std::size_t n_blocks = (n_traj + kBlock - 1) / kBlock;
  std::vector<Block> blocks(n_blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&] {
    try {
      for (std::size_t b = next++; b < n_blocks && !failed; b = next++) {
        Block& blk = blocks[b];
        blk.n1.assign(nt, 0.0);
        blk.n2.assign(nt, 0.0);
        blk.e1.assign(nt, 0.0);
        blk.e2.assign(nt, 0.0);
        if (options.keep_density) blk.rho.assign(nt, Matrix::Zero(d, d));
        for (std::size_t i = b * kBlock; i < std::min(n_traj, (b + 1) * kBlock); ++i) {
          TrajectoryOptions opt;
          opt.t_max = options.t_max;
          opt.sample_dt = options.sample_dt;
          opt.seed = options.seed;
          opt.index = i;
          std::vector<Vector> states;
          const TrajectoryRecord r = unravel(u, opt, options.keep_density ? &states : nullptr);
          for (std::size_t k = 0; k < nt; ++k) {
            blk.n1[k] += r.photon_number[k];
            blk.n2[k] += r.photon_number[k] * r.photon_number[k];
            blk.e1[k] += r.excitation[k];
            blk.e2[k] += r.excitation[k] * r.excitation[k];
            if (options.keep_density) blk.rho[k] += states[k] * states[k].adjoint();
          }
          for (const auto& j : r.jump_log) (j.channel == JumpChannel::cavity ? blk.cavity : blk.spontaneous)++;
        }
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleResult res;
  res.n_traj = n_traj;
  res.times = times;
  std::vector<double> n1(nt, 0.0), n2(nt, 0.0), e1(nt, 0.0), e2(nt, 0.0);
  if (options.keep_density) res.mean_density.assign(nt, Matrix::Zero(d, d));
  for (const Block& blk : blocks) {
    for (std::size_t k = 0; k < nt; ++k) {
      n1[k] += blk.n1[k];
      n2[k] += blk.n2[k];
      e1[k] += blk.e1[k];
      e2[k] += blk.e2[k];
      if (options.keep_density) res.mean_density[k] += blk.rho[k];
    }
    res.cavity_jumps += blk.cavity;
    res.spontaneous_jumps += blk.spontaneous;
  }
  const auto n = static_cast<double>(n_traj);
  auto stats = [n](double s1, double s2, double& mean, double& se) {
    mean = s1 / n;
    se = n > 1 ? std::sqrt(std::max(0.0, (s2 - n * mean * mean) / (n - 1)) / n) : 0.0;
  };
  res.mean_photon.resize(nt);
  res.se_photon.resize(nt);
  res.mean_excitation.resize(nt);
  res.se_excitation.resize(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    stats(n1[k], n2[k], res.mean_photon[k], res.se_photon[k]);
    stats(e1[k], e2[k], res.mean_excitation[k], res.se_excitation[k]);
    if (options.keep_density) res.mean_density[k] /= n;
  }
  return res;
}

EnsembleResult ensemble_average(const SystemParams& params, std::size_t n_traj, double t_max,
                                std::uint64_t seed) {
  EnsembleOptions opt;
  opt.t_max = t_max;
  opt.seed = seed;
  opt.sample_dt = t_max / 100.0;
  return ensemble_average(params, n_traj, opt);
}

TrajectoryRecord conditioned_after_emission(const SystemParams& params, double t_post,
                                            double sample_dt) {
  params.validate();
  const StateSpace space(params.n_max);
  const Superoperator l = build_liouvillian(params, space);
  const DensityMatrix rho = steady_state_from_vacuum(l, space);
  const Matrix a = annihilation(space);
  Matrix post = a * rho.matrix() * a.adjoint();
  const double p = post.trace().real();
  if (!(p > 0.0)) throw InvalidParameters("no photons to detect in the steady state (F = 0?)");
  post /= p;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (post + post.adjoint()));
  const Index top = es.eigenvalues().size() - 1;

  TrajectoryOptions opt;
  opt.t_max = t_post;
  opt.sample_dt = sample_dt;
  opt.initial = es.eigenvectors().col(top);
  opt.allow_jumps = false;
  return run_trajectory(params, opt);
}

}  // namespace opoqed
