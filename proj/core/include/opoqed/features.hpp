#pragma once

#include <cstddef>
#include <vector>

namespace opoqed {

struct Extremum {
  std::size_t index = 0;
  double omega = 0.0;
  double value = 0.0;
};

/// A strict local minimum lying between two strict local maxima, with
/// contrast (p − dip)/p measured against the lower flanking maximum p.
struct Hole {
  Extremum dip;
  Extremum left;
  Extremum right;
  double contrast = 0.0;
};

struct SpectrumFeatures {
  std::vector<Extremum> maxima;  // strict, above the noise floor
  std::vector<Hole> holes;       // contrast >= min_contrast
};

/// Maxima below noise_floor·max(values) are ignored, which keeps round-off
/// ripples in far tails from producing phantom peaks.
SpectrumFeatures find_features(const std::vector<double>& omega, const std::vector<double>& values,
                               double min_contrast = 0.01, double noise_floor = 1e-6);

/// Holes whose flanking maxima lie on one side of ω = 0 (ω = 0 itself counts
/// for either side): dips inside a peak rather than the valley of a doublet.
std::vector<Hole> holes_within_peaks(const SpectrumFeatures& features);

/// Outermost crossings of half the maximum inside [first, last], linearly
/// interpolated. Returns {left, right}.
struct HalfMaxSpan {
  double left = 0.0;
  double right = 0.0;
  [[nodiscard]] double width() const { return right - left; }
  [[nodiscard]] double center() const { return 0.5 * (left + right); }
};
HalfMaxSpan half_max_span(const std::vector<double>& omega, const std::vector<double>& values,
                          std::size_t first, std::size_t last);
double full_width_half_maximum(const std::vector<double>& omega, const std::vector<double>& values);

struct LineFit {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;     // Lorentzian: FWHM. Squared Lorentzian: w.
  double fwhm = 0.0;
  double residual = 0.0;  // max |data − model| / amplitude inside the window
  std::size_t window_points = 0;
};

/// A / (1 + ((ω − ω0)/(Γ/2))²), Levenberg–Marquardt over ±3 fitted widths.
LineFit fit_lorentzian(const std::vector<double>& omega, const std::vector<double>& values);
/// A·[w² / (w² + (ω − ω0)²)]², same procedure.
LineFit fit_squared_lorentzian(const std::vector<double>& omega, const std::vector<double>& values);

}  // namespace opoqed
