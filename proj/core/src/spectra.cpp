#include "opoqed/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"

namespace opoqed {
namespace {

std::vector<double> resolvent_real(const Resolvent& r, const std::vector<double>& omega,
                                   std::vector<Complex>* values) {
  *values = r.evaluate(omega);
  std::vector<double> out(values->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * (*values)[i].real();
  return out;
}

// Squeezing from normally ordered and time-ordered field correlations; `lower`
// is a or σ₋. The cosine transform is the half-sum of the one-sided
// transforms at ±ω, which sit at mirrored indices of the symmetric grid.
SpectrumTable build_table(const SystemParams& params, const FrequencyGrid& grid,
                          SpectrumChannel channel) {
  params.validate();
  check_grid_resolution(grid, params);
  if (params.n_max < 2) throw ChannelUnavailable("spectra need n_max >= 2");
  const StateSpace space(params.n_max);
  const Superoperator l = build_liouvillian(params, space);
  const DensityMatrix rho = steady_state_from_vacuum(l, space);
  const Matrix lower = channel == SpectrumChannel::transmitted ? annihilation(space) : sigma_minus(space);
  const Matrix upper = lower.adjoint();

  const Resolvent n_minus(correlation_system(l, rho, upper, lower, Ordering::zero_then_tau));
  const Resolvent n_plus(correlation_system(l, rho, lower, upper, Ordering::tau_then_zero));
  const Resolvent k_minus(correlation_system(l, rho, upper, upper, Ordering::zero_then_tau));
  const Resolvent k_plus(correlation_system(l, rho, upper, upper, Ordering::tau_then_zero));

  SpectrumTable t;
  t.channel = channel;
  t.omega = grid.values();
  std::vector<Complex> rn_minus, rn_plus, rk_minus, rk_plus;
  t.incoherent = resolvent_real(n_minus, t.omega, &rn_minus);
  (void)resolvent_real(n_plus, t.omega, &rn_plus);
  (void)resolvent_real(k_minus, t.omega, &rk_minus);
  (void)resolvent_real(k_plus, t.omega, &rk_plus);

  const std::size_t n = t.omega.size();
  t.squeeze_0.resize(n);
  t.squeeze_90.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    const Complex normal = 0.5 * (rn_plus[i] + rn_minus[i] + rn_plus[j] + rn_minus[j]);
    const Complex anomalous = 0.5 * (rk_plus[i] + rk_minus[i] + rk_plus[j] + rk_minus[j]);
    t.squeeze_0[i] = (normal + anomalous).real();
    t.squeeze_90[i] = (normal - anomalous).real();
  }
  return t;
}

}  // namespace

std::vector<double> FrequencyGrid::values() const {
  if (points < 2) throw InsufficientGrid("frequency grid needs at least 2 points");
  std::vector<double> w(static_cast<std::size_t>(points));
  const int last = points - 1;
  for (int i = 0; i <= last; ++i) {
    // Built from both ends so w[i] == -w[last-i] bit for bit.
    const int k = 2 * i - last;
    w[static_cast<std::size_t>(i)] = omega_max * static_cast<double>(k) / static_cast<double>(last);
  }
  return w;
}

double narrowest_width(const SystemParams& params) {
  double w = params.kappa;
  if (params.gamma > 0.0) w = std::min(w, params.gamma);
  return w;
}

FrequencyGrid default_frequency_grid(const SystemParams& params) {
  FrequencyGrid grid;
  grid.omega_max = 4.0 * std::max({params.g, params.kappa, params.gamma});
  const double need = 2.0 * grid.omega_max / (narrowest_width(params) / 20.0);
  int points = std::max(4001, static_cast<int>(std::ceil(need)) + 1);
  if (points % 2 == 0) ++points;
  grid.points = points;
  return grid;
}

void check_grid_resolution(const FrequencyGrid& grid, const SystemParams& params) {
  if (grid.points < 3 || !(grid.omega_max > 0.0)) {
    throw InsufficientGrid("frequency grid needs >= 3 points and a positive range");
  }
  const double limit = narrowest_width(params) / 20.0;
  if (grid.spacing() > limit * (1.0 + 1e-12)) {
    throw InsufficientGrid("frequency spacing " + std::to_string(grid.spacing()) +
                           " exceeds min(kappa, gamma)/20 = " + std::to_string(limit));
  }
}

const char* to_string(SpectrumChannel c) {
  return c == SpectrumChannel::transmitted ? "transmitted" : "fluorescent";
}

std::vector<double> SpectrumTable::normalized() const {
  double peak = 0.0;
  for (double v : incoherent) peak = std::max(peak, v);
  std::vector<double> out(incoherent.size(), 0.0);
  if (peak > 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = incoherent[i] / peak;
  }
  return out;
}

SpectrumTable transmitted_spectrum(const SystemParams& params, const FrequencyGrid& grid) {
  return build_table(params, grid, SpectrumChannel::transmitted);
}

SpectrumTable fluorescent_spectrum(const SystemParams& params, const FrequencyGrid& grid) {
  return build_table(params, grid, SpectrumChannel::fluorescent);
}

std::vector<double> weakfield_incoherent_spectrum(const SystemParams& params, SpectrumChannel channel,
                                                  const std::vector<double>& omega, bool printed) {
  const WeakFieldState s = weakfield_steady_state(params);
  const Channel c = channel == SpectrumChannel::transmitted ? Channel::A : Channel::C;
  return resolvent_spectrum(weakfield_regression_system(params, c, s, printed), omega);
}

DualPathReport compare_regression_paths(const SystemParams& params, SpectrumChannel channel,
                                        const std::vector<double>& omega, bool printed,
                                        const std::function<void(Matrix&)>& tamper) {
  params.validate();
  const Channel c = channel == SpectrumChannel::transmitted ? Channel::A : Channel::C;
  auto general = [&](const SystemParams& p) {
    const StateSpace space(p.n_max);
    const DensityMatrix rho = steady_state_from_vacuum(build_liouvillian(p, space), space);
    return resolvent_spectrum(regression_system(p, c, rho), omega);
  };
  auto deviation = [](const std::vector<double>& a, const std::vector<double>& b) {
    double peak = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      peak = std::max({peak, std::abs(a[i]), std::abs(b[i])});
      dev = std::max(dev, std::abs(a[i] - b[i]));
    }
    return peak > 0.0 ? dev / peak : 0.0;
  };
  SystemParams half = params;
  half.F = 0.5 * params.F;
  const auto g1 = general(params), g2 = general(half);
  auto reduced = [&](const SystemParams& p) {
    RegressionSystem sys = weakfield_regression_system(p, c, weakfield_steady_state(p), printed);
    if (tamper) tamper(sys.evolution);
    return resolvent_spectrum(sys, omega);
  };
  const auto p1 = reduced(params), p2 = reduced(half);

  DualPathReport rep;
  rep.raw = deviation(g1, p1);
  std::vector<double> gx(omega.size()), px(omega.size());
  const double f1 = params.F * params.F, f2 = half.F * half.F;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    gx[i] = (4.0 * g2[i] / f2 - g1[i] / f1) / 3.0;
    px[i] = (4.0 * p2[i] / f2 - p1[i] / f1) / 3.0;
  }
  rep.extrapolated = deviation(gx, px);
  return rep;
}

SqueezeIdentityReport squeezing_identity_check(const SpectrumTable& table) {
  const std::size_t n = table.incoherent.size();
  if (table.squeeze_0.size() != n || table.squeeze_90.size() != n) {
    throw DimensionMismatch("spectrum table columns differ in length");
  }
  std::vector<double> sum(n);
  double max_i = 0.0, max_sum = 0.0, max_s0 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum[k] = table.squeeze_0[k] + table.squeeze_90[k];
    max_i = std::max(max_i, std::abs(table.incoherent[k]));
    max_sum = std::max(max_sum, std::abs(sum[k]));
    max_s0 = std::max(max_s0, std::abs(table.squeeze_0[k]));
  }
  SqueezeIdentityReport rep;
  rep.cancellation = max_s0 > 0.0 ? max_sum / max_s0 : 0.0;
  if (!(max_i > 0.0) || !(max_sum > 0.0)) {
    rep.degenerate = true;
    return rep;
  }
  auto deviation = [&](double c) {
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(table.incoherent[k] - c * sum[k]));
    return d;
  };
  // max-norm deviation is convex in c; bracket around the least-squares value.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    num += table.incoherent[k] * sum[k];
    den += sum[k] * sum[k];
  }
  const double c_ls = num / den;
  double lo = c_ls - std::abs(c_ls) - 1.0, hi = c_ls + std::abs(c_ls) + 1.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = deviation(x1), f2 = deviation(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(c_ls)); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = deviation(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = deviation(x2);
    }
  }
  rep.constant = 0.5 * (lo + hi);
  rep.residual = std::min(deviation(rep.constant), deviation(c_ls)) / max_i;
  if (deviation(c_ls) < deviation(rep.constant)) rep.constant = c_ls;
  return rep;
}

}  // namespace opoqed
