#include "opoqed/features.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "opoqed/errors.hpp"

namespace opoqed {
namespace {

void check_sizes(const std::vector<double>& omega, const std::vector<double>& values) {
  if (omega.size() != values.size()) throw DimensionMismatch("omega and values differ in length");
  if (omega.size() < 3) throw InsufficientGrid("need at least 3 samples");
}

double crossing(double x0, double y0, double x1, double y1, double level) {
  if (y1 == y0) return 0.5 * (x0 + x1);
  return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

using Shape = std::function<double(double, const Eigen::VectorXd&)>;

struct FitFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<double>* x = nullptr;
  const std::vector<double>* y = nullptr;
  Shape shape;

  [[nodiscard]] int inputs() const { return 3; }
  [[nodiscard]] int values() const { return static_cast<int>(x->size()); }
  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    for (std::size_t i = 0; i < x->size(); ++i) f[static_cast<Eigen::Index>(i)] = shape((*x)[i], p) - (*y)[i];
    return 0;
  }
};

LineFit fit_shape(const std::vector<double>& omega, const std::vector<double>& values,
                  const Shape& shape, double fwhm_per_width) {
  check_sizes(omega, values);
  const auto peak_it = std::max_element(values.begin(), values.end());
  if (!(*peak_it > 0.0)) throw std::invalid_argument("cannot fit a non-positive spectrum");
  const double fwhm = full_width_half_maximum(omega, values);
  Eigen::VectorXd p(3);
  p << *peak_it, omega[static_cast<std::size_t>(peak_it - values.begin())], fwhm / fwhm_per_width;

  LineFit out;
  std::vector<double> wx, wy;
  for (int pass = 0; pass < 4; ++pass) {
    const double half_window = 3.0 * std::abs(p[2]);
    wx.clear();
    wy.clear();
    for (std::size_t i = 0; i < omega.size(); ++i) {
      if (std::abs(omega[i] - p[1]) <= half_window) {
        wx.push_back(omega[i]);
        wy.push_back(values[i]);
      }
    }
    if (wx.size() < 4) throw InsufficientGrid("fit window holds fewer than 4 samples");
    FitFunctor fn{&wx, &wy, shape};
    Eigen::NumericalDiff<FitFunctor> numdiff(fn);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor>> lm(numdiff);
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    lm.parameters.maxfev = 4000;
    lm.minimize(p);
    p[2] = std::abs(p[2]);
  }
  out.amplitude = p[0];
  out.center = p[1];
  out.width = p[2];
  out.fwhm = p[2] * fwhm_per_width;
  out.window_points = wx.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < wx.size(); ++i) worst = std::max(worst, std::abs(shape(wx[i], p) - wy[i]));
  out.residual = worst / std::abs(p[0]);
  return out;
}

}  // namespace

SpectrumFeatures find_features(const std::vector<double>& omega, const std::vector<double>& values,
                               double min_contrast, double noise_floor) {
  check_sizes(omega, values);
  const double top = *std::max_element(values.begin(), values.end());
  SpectrumFeatures f;
  if (!(top > 0.0)) return f;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1] && values[i] >= noise_floor * top) {
      f.maxima.push_back({i, omega[i], values[i]});
    }
  }
  for (std::size_t k = 0; k + 1 < f.maxima.size(); ++k) {
    const Extremum& l = f.maxima[k];
    const Extremum& r = f.maxima[k + 1];
    // Deepest point between neighbouring maxima; it must be a strict minimum.
    std::size_t m = l.index;
    for (std::size_t i = l.index; i <= r.index; ++i) {
      if (values[i] < values[m]) m = i;
    }
    if (!(values[m] < values[m - 1] && values[m] < values[m + 1])) continue;
    const double ref = std::min(l.value, r.value);
    const double contrast = (ref - values[m]) / ref;
    if (contrast >= min_contrast) f.holes.push_back({{m, omega[m], values[m]}, l, r, contrast});
  }
  return f;
}

std::vector<Hole> holes_within_peaks(const SpectrumFeatures& features) {
  std::vector<Hole> out;
  for (const Hole& h : features.holes) {
    const bool right_side = h.left.omega >= 0.0 && h.right.omega >= 0.0;
    const bool left_side = h.left.omega <= 0.0 && h.right.omega <= 0.0;
    if (right_side || left_side) out.push_back(h);
  }
  return out;
}

HalfMaxSpan half_max_span(const std::vector<double>& omega, const std::vector<double>& values,
                          std::size_t first, std::size_t last) {
  check_sizes(omega, values);
  if (first >= last || last >= values.size()) throw std::out_of_range("bad half-max range");
  std::size_t top = first;
  for (std::size_t i = first; i <= last; ++i) {
    if (values[i] > values[top]) top = i;
  }
  const double level = 0.5 * values[top];
  std::size_t lo = first, hi = last;
  while (lo < top && values[lo] < level) ++lo;
  while (hi > top && values[hi] < level) --hi;
  HalfMaxSpan s;
  s.left = lo > first ? crossing(omega[lo - 1], values[lo - 1], omega[lo], values[lo], level) : omega[lo];
  s.right = hi < last ? crossing(omega[hi], values[hi], omega[hi + 1], values[hi + 1], level) : omega[hi];
  return s;
}

double full_width_half_maximum(const std::vector<double>& omega, const std::vector<double>& values) {
  return half_max_span(omega, values, 0, values.size() - 1).width();
}

LineFit fit_lorentzian(const std::vector<double>& omega, const std::vector<double>& values) {
  const Shape lorentz = [](double w, const Eigen::VectorXd& p) {
    const double x = (w - p[1]) / (0.5 * p[2]);
    return p[0] / (1.0 + x * x);
  };
  return fit_shape(omega, values, lorentz, 1.0);
}

LineFit fit_squared_lorentzian(const std::vector<double>& omega, const std::vector<double>& values) {
  const Shape squared = [](double w, const Eigen::VectorXd& p) {
    const double w2 = p[2] * p[2];
    const double d = w - p[1];
    const double l = w2 / (w2 + d * d);
    return p[0] * l * l;
  };
  return fit_shape(omega, values, squared, 2.0 * std::sqrt(std::sqrt(2.0) - 1.0));
}

}  // namespace opoqed
