#include <benchmark/benchmark.h>

#include "opoqed/hilbert.hpp"
#include "opoqed/lindblad.hpp"
#include "opoqed/oracle.hpp"
#include "opoqed/spectra.hpp"
#include "opoqed/trajectories.hpp"
#include "opoqed/weakfield.hpp"

using namespace opoqed;

namespace {

SystemParams params(int n_max, double F) {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 10.0;
  p.gamma = 1.0;
  p.F = F;
  p.n_max = n_max;
  return p;
}

void BM_SteadyState(benchmark::State& state) {
  const SystemParams p = params(static_cast<int>(state.range(0)), 0.1);
  const StateSpace s(p.n_max);
  const Superoperator l = build_liouvillian(p, s);
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(l));
  state.SetLabel("d^2=" + std::to_string(s.dim() * s.dim()));
}
BENCHMARK(BM_SteadyState)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_WeakFieldSteadyState(benchmark::State& state) {
  const SystemParams p = params(2, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(weakfield_steady_state(p));
}
BENCHMARK(BM_WeakFieldSteadyState);

void BM_TransmittedSpectrum(benchmark::State& state) {
  const SystemParams p = params(static_cast<int>(state.range(0)), 1e-3);
  const FrequencyGrid g = default_frequency_grid(p);
  for (auto _ : state) benchmark::DoNotOptimize(transmitted_spectrum(p, g));
  state.SetItemsProcessed(state.iterations() * g.points);
}
BENCHMARK(BM_TransmittedSpectrum)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_OracleTransform(benchmark::State& state) {
  const SystemParams p = params(2, 1e-3);
  const double tau_max = default_tau_max(p);
  const auto series = time_domain_correlation(p, SpectrumChannel::transmitted, tau_max,
                                              default_tau_steps(p, tau_max, 40.0));
  const auto omega = FrequencyGrid{40.0, static_cast<int>(state.range(0))}.values();
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_via_transform(series, omega));
}
BENCHMARK(BM_OracleTransform)->Arg(401)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_TrajectoryEnsemble(benchmark::State& state) {
  const SystemParams p = params(6, 0.1);
  EnsembleOptions o;
  o.t_max = 1.0;
  o.sample_dt = 0.05;
  o.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble_average(p, static_cast<std::size_t>(state.range(0)), o));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrajectoryEnsemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
