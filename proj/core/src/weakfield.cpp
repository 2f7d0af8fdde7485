#include "opoqed/weakfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/LU>
#include <json.hpp>

#include "opoqed/errors.hpp"
#include "opoqed/hilbert.hpp"

namespace opoqed {
namespace {

using Pair = std::pair<BasisState, BasisState>;

constexpr BasisState g0{Atom::ground, 0}, g1{Atom::ground, 1}, e0{Atom::excited, 0},
    g2{Atom::ground, 2}, e1{Atom::excited, 1};

// (bra, ket) of each named element, in kNames order.
constexpr std::array<Pair, 9> kElements = {{
    {g0, g0}, {e0, e0}, {g1, g1}, {e1, e1}, {g2, g2}, {g0, e1}, {g0, g2}, {e0, g1}, {e1, g2}}};

Index vec_of(const StateSpace& s, const Pair& p) {
  return vec_index(s.index_of(p.first), s.index_of(p.second), s.dim());
}

Matrix submatrix(const Matrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  }
  return out;
}

Vector solve_block(const Matrix& a, const Vector& rhs, const char* what) {
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw SingularSystem(std::string("weak-field ") + what + " block is singular");
  }
  return lu.solve(rhs);
}

}  // namespace

Complex WeakFieldState::get(std::string_view name) const {
  const auto v = values();
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return v[i];
  }
  throw std::out_of_range("unknown weak-field element " + std::string(name));
}

WeakFieldState WeakFieldState::from_density(const DensityMatrix& rho, const StateSpace& space) {
  if (space.n_max() < 2) throw DimensionMismatch("weak-field elements need n_max >= 2");
  if (rho.dim() != space.dim()) throw DimensionMismatch("density matrix size");
  auto at = [&](const Pair& p) {
    return rho(space.index_of(p.first), space.index_of(p.second));
  };
  WeakFieldState s;
  s.p00 = at(kElements[0]);
  s.pe0 = at(kElements[1]);
  s.p1 = at(kElements[2]);
  s.pe1 = at(kElements[3]);
  s.p2 = at(kElements[4]);
  s.c01p = at(kElements[5]);
  s.c02 = at(kElements[6]);
  s.ce1 = at(kElements[7]);
  s.c12 = at(kElements[8]);
  return s;
}

DensityMatrix WeakFieldState::to_density() const {
  const StateSpace space(2);
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  const auto v = values();
  for (std::size_t k = 0; k < kElements.size(); ++k) {
    const Index i = space.index_of(kElements[k].first);
    const Index j = space.index_of(kElements[k].second);
    m(i, j) = v[k];
    m(j, i) = std::conj(v[k]);
  }
  return DensityMatrix(std::move(m));
}

WeakFieldState weakfield_steady_state(const SystemParams& params) {
  params.validate();
  if (params.F <= 0.0) throw InvalidParameters("weak-field solution needs F > 0");

  const StateSpace space(2);
  SystemParams undriven = params;
  undriven.F = 0.0;
  undriven.n_max = 2;
  SystemParams unit = undriven;
  unit.F = 1.0;
  const Matrix l0 = build_liouvillian(undriven, space).matrix();
  // L is affine in F, so this is ∂L/∂F.
  const Matrix lf = build_liouvillian(unit, space).matrix() - l0;

  // Order F: ρ(g0,g2), ρ(g0,e1) and, by Hermiticity, their transposes.
  const std::vector<Pair> first = {{g0, g2}, {g0, e1}};
  // Order F²: everything inside the 1- and 2-quanta shells that is diagonal in
  // total quanta. ρ(g0,g0) = 1 is the source, its own equation is dropped.
  const std::vector<Pair> second = {{g1, g1}, {g1, e0}, {e0, g1}, {e0, e0},
                                    {g2, g2}, {g2, e1}, {e1, g2}, {e1, e1}};

  std::vector<Index> idx1, idx1t, idx2;
  for (const auto& p : first) {
    idx1.push_back(vec_of(space, p));
    idx1t.push_back(vec_of(space, {p.second, p.first}));
  }
  for (const auto& p : second) idx2.push_back(vec_of(space, p));
  const Index vac = vec_of(space, {g0, g0});

  const double f = params.F;
  Vector src1(2);
  for (Index r = 0; r < 2; ++r) src1[r] = f * lf(idx1[r], vac);
  const Vector c = solve_block(submatrix(l0, idx1, idx1), -src1, "order-F");
  const Vector ct = c.conjugate();

  const Vector src2 = f * (submatrix(lf, idx2, idx1) * c + submatrix(lf, idx2, idx1t) * ct);
  const Vector x = solve_block(submatrix(l0, idx2, idx2), -src2, "order-F^2");

  auto second_at = [&](const Pair& p) {
    for (std::size_t k = 0; k < second.size(); ++k) {
      if (second[k] == p) return x[static_cast<Index>(k)];
    }
    throw std::logic_error("element not in order-F^2 block");
  };

  WeakFieldState s;
  s.p00 = 1.0;
  s.c02 = c[0];
  s.c01p = c[1];
  s.pe0 = second_at({e0, e0});
  s.p1 = second_at({g1, g1});
  s.pe1 = second_at({e1, e1});
  s.p2 = second_at({g2, g2});
  s.ce1 = second_at({e0, g1});
  s.c12 = second_at({e1, g2});
  return s;
}

bool ScalingReport::all_within(double tol) const {
  return std::all_of(elements.begin(), elements.end(),
                     [tol](const ElementScaling& e) { return !e.present() || e.within(tol); });
}

const ElementScaling& ScalingReport::element(std::string_view name) const {
  for (const auto& e : elements) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no scaling entry " + std::string(name));
}

std::string ScalingReport::to_json() const {
  nlohmann::ordered_json j;
  j["drives"] = drives;
  auto& arr = j["elements"] = nlohmann::ordered_json::array();
  for (const auto& e : elements) {
    nlohmann::ordered_json item;
    item["name"] = e.name;
    item["expected_exponent"] = e.expected;
    if (e.fitted) {
      item["fitted_exponent"] = *e.fitted;
    } else {
      item["fitted_exponent"] = nullptr;
      item["note"] = "identically zero; exponent not defined";
    }
    item["within_0.05"] = e.within(0.05);
    arr.push_back(std::move(item));
  }
  j["all_within_0.05"] = all_within(0.05);
  return j.dump(2);
}

ScalingReport verify_scalings(const SystemParams& params, const std::vector<double>& drives) {
  if (drives.size() < 3) throw InsufficientGrid("scaling fit needs at least 3 drive values");
  if (std::any_of(drives.begin(), drives.end(), [](double f) { return !(f > 0.0); })) {
    throw InsufficientGrid("drive values must be positive");
  }
  const auto [lo, hi] = std::minmax_element(drives.begin(), drives.end());
  if (*hi / *lo < 10.0 * (1.0 - 1e-12)) {
    throw InsufficientGrid("drive values must span at least one decade");
  }

  const StateSpace space(params.n_max);
  std::vector<WeakFieldState> states;
  for (double f : drives) {
    SystemParams p = params;
    p.F = f;
    const Superoperator l = build_liouvillian(p, space);
    states.push_back(WeakFieldState::from_density(steady_state_from_vacuum(l, space), space));
  }

  ScalingReport report;
  report.drives = drives;
  const std::array<int, 9> expected = {0, 2, 2, 2, 2, 1, 1, 2, 2};
  for (std::size_t k = 1; k < WeakFieldState::kNames.size(); ++k) {
    ElementScaling e;
    e.name = std::string(WeakFieldState::kNames[k]);
    e.expected = expected[k];
    std::vector<double> xs, ys;
    bool vanishes = false;
    for (std::size_t i = 0; i < drives.size(); ++i) {
      const double mag = std::abs(states[i].values()[k]);
      // Solver round-off sits many orders below any genuine F² element.
      if (!(mag > 1e-13 * drives[i] * drives[i])) {
        vanishes = true;
        break;
      }
      xs.push_back(std::log(drives[i]));
      ys.push_back(std::log(mag));
    }
    if (!vanishes) {
      const double n = static_cast<double>(xs.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      e.fitted = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    report.elements.push_back(std::move(e));
  }
  return report;
}

}  // namespace opoqed
