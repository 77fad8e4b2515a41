#ifndef VANISHDAMP_REFERENCE_HPP
#define VANISHDAMP_REFERENCE_HPP

#include "vanishdamp/composite.hpp"
#include "vanishdamp/damping.hpp"
#include "vanishdamp/state.hpp"

namespace vanishdamp {

struct ReferenceOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 50000000;
};

/// Short-horizon oracle: adaptive Dormand-Prince 5(4) on the first-order
/// system (u, w)' = (w, -gamma w - A u - f(u)). Entirely separate from the
/// fixed-step production scheme; used to pin its order and endpoint error.
StateVector reference_integrate(const CompositePotential& problem, const DampingSchedule& sched,
                                const StateVector& init, double t_end,
                                const ReferenceOptions& opts = {});

} // namespace vanishdamp

#endif
