#include "opoqed/csv.hpp"

#include <cstdio>
#include <ostream>

#include "opoqed/errors.hpp"

namespace opoqed {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const SpectrumTable& t) {
  const std::size_t n = t.omega.size();
  if (t.incoherent.size() != n || t.squeeze_0.size() != n || t.squeeze_90.size() != n) {
    throw DimensionMismatch("spectrum table columns differ in length");
  }
  const auto norm = t.normalized();
  out << "omega,incoherent,squeeze_0,squeeze_90,incoherent_normalized\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << format_double(t.omega[i]) << ',' << format_double(t.incoherent[i]) << ','
        << format_double(t.squeeze_0[i]) << ',' << format_double(t.squeeze_90[i]) << ','
        << format_double(norm[i]) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& r) {
  out << "time,photon_number,excitation\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << format_double(r.times[i]) << ',' << format_double(r.photon_number[i]) << ','
        << format_double(r.excitation[i]) << '\n';
  }
}

void write_jump_log_csv(std::ostream& out, const TrajectoryRecord& r) {
  out << "time,channel\n";
  for (const auto& j : r.jump_log) out << format_double(j.time) << ',' << to_string(j.channel) << '\n';
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& r) {
  out << "time,mean_photon_number,se_photon_number,mean_excitation,se_excitation\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << format_double(r.times[i]) << ',' << format_double(r.mean_photon[i]) << ','
        << format_double(r.se_photon[i]) << ',' << format_double(r.mean_excitation[i]) << ','
        << format_double(r.se_excitation[i]) << '\n';
  }
}

}  // namespace opoqed
