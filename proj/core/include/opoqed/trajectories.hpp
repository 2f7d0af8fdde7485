#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "opoqed/hilbert.hpp"
#include "opoqed/lindblad.hpp"
#include "opoqed/params.hpp"
#include "opoqed/types.hpp"

namespace opoqed {

enum class JumpChannel : std::uint8_t { cavity, spontaneous };
const char* to_string(JumpChannel c);

struct JumpEvent {
  double time = 0.0;
  JumpChannel channel = JumpChannel::cavity;
};

/// Unnormalized between jumps; the squared norm is the no-jump probability
/// since the last collapse.
struct ConditionedState {
  Vector amplitudes;
  double time = 0.0;
  std::vector<JumpEvent> jump_log;
  [[nodiscard]] double squared_norm() const { return amplitudes.squaredNorm(); }
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> photon_number;  // ⟨ψ|a†a|ψ⟩/⟨ψ|ψ⟩
  std::vector<double> excitation;     // ⟨ψ|σ₊σ₋|ψ⟩/⟨ψ|ψ⟩
  std::vector<JumpEvent> jump_log;
  [[nodiscard]] double max_photon_number() const;
};

/// H_eff = H − (i/2) Σ c†c = H − iκ a†a − i(γ/2) σ₊σ₋.
Matrix effective_hamiltonian(const SystemParams& params, const StateSpace& space);

/// Per-trajectory generator: mt19937_64 seeded with a SplitMix64 hash of
/// (seed, index). Uniforms are (k + 0.5)·2⁻⁵³ from the top 53 bits, so they
/// never hit 0 or 1.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed, std::uint64_t index);
  double uniform();
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

struct TrajectoryOptions {
  double t_max = 1.0;
  double sample_dt = 0.01;
  std::uint64_t seed = 1;
  std::uint64_t index = 0;            // stream number within an ensemble
  std::optional<Vector> initial;      // default |g,0⟩
  bool allow_jumps = true;
  double norm_tolerance = 1e-10;      // bisection tolerance on the squared norm
  double overflow_threshold = 1e-6;   // top-shell population guard
};

/// Waiting-time unraveling with c_cav = √(2κ)a and c_spon = √γ σ₋. The drift
/// is the exact propagator exp(−i H_eff t); jump instants are located by
/// bisection on the squared norm. Throws TruncationOverflow when the top
/// total-quanta shell holds more than overflow_threshold of the population.
TrajectoryRecord run_trajectory(const SystemParams& params, const TrajectoryOptions& options);
TrajectoryRecord run_trajectory(const SystemParams& params, double t_max, std::uint64_t seed,
                                double sample_dt);

struct EnsembleResult {
  std::size_t n_traj = 0;
  std::vector<double> times;
  std::vector<double> mean_photon, se_photon;
  std::vector<double> mean_excitation, se_excitation;
  std::size_t cavity_jumps = 0;
  std::size_t spontaneous_jumps = 0;
  /// Average of normalized |ψ⟩⟨ψ| at each sample time, when requested.
  std::vector<Matrix> mean_density;
};

struct EnsembleOptions {
  double t_max = 1.0;
  double sample_dt = 0.01;
  std::uint64_t seed = 1;
  bool keep_density = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Trajectory i uses stream (seed, i). Partial sums are formed over fixed
/// blocks of trajectories and combined in block order, so results do not
/// depend on the thread count.
EnsembleResult ensemble_average(const SystemParams& params, std::size_t n_traj,
                                const EnsembleOptions& options);
EnsembleResult ensemble_average(const SystemParams& params, std::size_t n_traj, double t_max,
                                std::uint64_t seed);

/// Photon-detection conditioning: the dominant eigenvector of a·ρ_ss·a†/tr is
/// propagated under the no-jump drift for t_post.
TrajectoryRecord conditioned_after_emission(const SystemParams& params, double t_post,
                                            double sample_dt = 0.001);

}  // namespace opoqed
