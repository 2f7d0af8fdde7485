#pragma once

#include <complex>

#include <Eigen/Dense>

namespace opoqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace opoqed
