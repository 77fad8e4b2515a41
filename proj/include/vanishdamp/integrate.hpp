#ifndef VANISHDAMP_INTEGRATE_HPP
#define VANISHDAMP_INTEGRATE_HPP

#include <optional>

#include "vanishdamp/composite.hpp"
#include "vanishdamp/damping.hpp"
#include "vanishdamp/state.hpp"

namespace vanishdamp {

struct IntegrateOptions {
    double h = 1e-3;
    double t_end = 1e3;
    double sample_ratio = 1.05;   // geometric sampling, starting at t = 1
    double sample_start = 1.0;
    std::vector<double> weighted_energy_exponents;  // r != -1
    std::vector<double> weighted_speed_exponents;
    std::optional<Vec> anchor;    // defaults to the certified minimizer
    double lipschitz_f = 0.0;     // gradient-Lipschitz bound entering h_max
};

/// Explicit-scheme stability guard: 0.5 / sqrt(||A|| + L_f).
double max_stable_step(const OperatorSpec& op, double lipschitz_f);

/// One step of the damped velocity-Verlet scheme: half kick with force
/// -(Au + f(u)) and damping pre-factor (1 - h*g/2), full drift, half kick
/// divided by (1 + h*g/2), with g = gamma evaluated at the midpoint time.
/// Globally second order; reduces to plain Verlet when gamma = 0.
StateVector step(const StateVector& state, double h, const CompositePotential& problem,
                 const DampingSchedule& sched);

/// Energy record at a state: E = 0.5|w|^2 + phi(u) - min phi.
EnergyRecord energy(const StateVector& state, const CompositePotential& problem,
                    const DampingSchedule& sched);

/// Fixed-step integration of u'' + gamma(t) u' + Au + f(u) = 0 from init to
/// t_end, updating every accumulator each step by the trapezoidal rule and
/// emitting samples on the geometric grid plus t=0 and the endpoint.
Trajectory integrate(const CompositePotential& problem, const DampingSchedule& sched,
                     const StateVector& init, const IntegrateOptions& opts,
                     const std::string& problem_id = "");

/// max over samples of |E(t) - E(0) + dissipation(t)|: the discrete
/// energy-balance defect of the run.
double dissipation_residual(const Trajectory& traj);

} // namespace vanishdamp

#endif
