#pragma once

#include <iosfwd>
#include <string>

#include "opoqed/spectra.hpp"
#include "opoqed/trajectories.hpp"

namespace opoqed {

/// Shortest text that round-trips: printf "%.17g".
std::string format_double(double v);

/// omega,incoherent,squeeze_0,squeeze_90,incoherent_normalized
void write_spectrum_csv(std::ostream& out, const SpectrumTable& table);
/// time,photon_number,excitation
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);
/// time,channel
void write_jump_log_csv(std::ostream& out, const TrajectoryRecord& record);
/// time,mean_photon_number,se_photon_number,mean_excitation,se_excitation
void write_ensemble_csv(std::ostream& out, const EnsembleResult& result);

}  // namespace opoqed
