#ifndef VANISHDAMP_SVG_HPP
#define VANISHDAMP_SVG_HPP

#include <iosfwd>
#include <span>

#include "vanishdamp/state.hpp"

namespace vanishdamp {

/// log-log plot of E against t with reference slopes -1 and -(1+alpha_bar)
/// overlaid for each probe; pure text output, no external tooling.
void write_loglog_svg(const Trajectory& traj, std::span<const double> alpha_bar_probes,
                      std::ostream& os);

} // namespace vanishdamp

#endif
