#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "opoqed/errors.hpp"
#include "opoqed/types.hpp"

namespace opoqed {

struct AdaptiveOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: pick from the problem scale
  double min_step = 1e-14;    // relative to max(1, |t|)
  std::size_t max_steps = 50'000'000;
};

/// Dormand–Prince 5(4) embedded Runge–Kutta with the usual PI-free step
/// controller. Integrates y' = rhs(t, y) from t0 to t1 (t1 >= t0).
/// Throws IntegrationFailure when the step size underflows.
template <class Rhs>
Vector integrate_dopri5(Rhs&& rhs, Vector y, double t0, double t1,
                        const AdaptiveOptions& opt = {}) {
  if (t1 < t0) throw IntegrationFailure("integration end precedes start");
  if (t1 == t0) return y;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b*, the embedded 4th order difference
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  Vector k1 = rhs(t, y);
  double h = opt.initial_step;
  if (h <= 0.0) {
    const double scale = std::max(y.cwiseAbs().maxCoeff(), opt.atol);
    const double rate = k1.cwiseAbs().maxCoeff();
    h = rate > 0.0 ? 0.01 * scale / rate : (t1 - t0);
    h = std::min(h, t1 - t0);
  }

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (t >= t1) return y;
    h = std::min(h, t1 - t);
    if (h < opt.min_step * std::max(1.0, std::abs(t))) {
      throw IntegrationFailure("step size underflow at t=" + std::to_string(t));
    }

    const Vector k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Vector k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 =
        rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vector y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = rhs(t + h, y_new);
    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / sc);
    }

    if (err_norm <= 1.0) {
      t += h;
      y = std::move(y_new);
      k1 = k7;  // FSAL
    }
    const double factor =
        err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h *= factor;
  }
  throw IntegrationFailure("maximum number of integration steps exceeded");
}

}  // namespace opoqed
