#ifndef VANISHDAMP_CSVIO_HPP
#define VANISHDAMP_CSVIO_HPP

#include <iosfwd>
#include <string>

#include "vanishdamp/state.hpp"

namespace vanishdamp {

/// Shortest decimal string that round-trips the IEEE-754 double exactly.
std::string format_double(double x);

/// Columns: t,E,speed_sq,gamma,phi_gap,dissipation, then one column per
/// configured weighted integral (wE_r{r} / wS_q{q}), then p and dp.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
std::string trajectory_csv(const Trajectory& traj);

/// Rebuilds sample records (energies, accumulators) from a trajectory CSV.
/// State vectors are not stored in the CSV, so they come back empty.
Trajectory read_trajectory_csv(std::istream& is);

} // namespace vanishdamp

#endif
