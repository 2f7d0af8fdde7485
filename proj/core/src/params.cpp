#include "opoqed/params.hpp"

#include <cmath>
#include <sstream>

#include "opoqed/errors.hpp"

namespace opoqed {

void SystemParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(g) || !finite(kappa) || !finite(gamma) || !finite(F)) {
    throw InvalidParameters("rates must be finite");
  }
  if (g < 0.0) throw InvalidParameters("g must be >= 0");
  if (kappa <= 0.0) throw InvalidParameters("kappa must be > 0");
  if (gamma < 0.0) throw InvalidParameters("gamma must be >= 0");
  if (F < 0.0) throw InvalidParameters("F must be >= 0");
  if (n_max < 0) throw InvalidParameters("n_max must be >= 0");
}

std::vector<std::string> SystemParams::warnings() const {
  std::vector<std::string> out;
  if (weak_field_violated()) {
    std::ostringstream os;
    os << "drive F=" << F << " exceeds 0.1*kappa=" << 0.1 * kappa
       << "; weak-field (one pair at a time) picture does not apply";
    out.push_back(os.str());
  }
  const int wanted = recommended_n_max(F, gamma, kappa);
  if (n_max < wanted) {
    std::ostringstream os;
    os << "truncation n_max=" << n_max << " is below the recommended " << wanted
       << " for this drive";
    out.push_back(os.str());
  }
  return out;
}

int recommended_n_max(double F, double gamma, double kappa) {
  const double ratio = gamma > 0.0 ? F / gamma : F / kappa;
  if (ratio <= 0.01) return 2;
  if (ratio <= 0.5) return 6;
  return 10;
}

}  // namespace opoqed
