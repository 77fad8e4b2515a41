#ifndef VANISHDAMP_ANALYSIS_HPP
#define VANISHDAMP_ANALYSIS_HPP

#include <span>
#include <utility>

#include "vanishdamp/composite.hpp"
#include "vanishdamp/damping.hpp"
#include "vanishdamp/state.hpp"

namespace vanishdamp {

/// Least-squares decay fit of -log E against log t on a tail window.
struct RateReport {
    double fitted_exponent = 0.0;  // slope rho: E ~ t^-rho on the window
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;  // rms residual of the log-log fit
    int samples_in_window = 0;
    /// (s, max over window of t^s * E(t)) for each probed exponent s.
    std::vector<std::pair<double, double>> tail_sup;
};

/// Finite-horizon convergence proxy for an improper weighted integral:
/// saturated iff the last decade of time contributes at most theta of the
/// total (Cauchy criterion).
struct IntegrabilityReport {
    double exponent = 0.0;
    std::vector<double> increments;  // integral over consecutive sample gaps
    double total = 0.0;
    double last_decade_share = 0.0;
    bool saturated = false;
};

struct DecayLemmaReport {
    double r = 0.0;
    IntegrabilityReport premise;  // int (1+t)^r E
    bool premise_saturated = false;
    /// (t, t^{1+r} E(t)) over the last decade.
    std::vector<std::pair<double, double>> conclusion_decay;
    bool tail_nonincreasing = false;
    double tail_decade_ratio = 0.0;  // value at t_end over value a decade earlier
    IntegrabilityReport conclusion_speed;  // int (1+t)^{r+1-alpha} |u'|^2
};

struct BootstrapReport {
    double nu = 0.0;
    double conclusion_exponent = 0.0;  // nu + 1 - alpha
    IntegrabilityReport premise;
    IntegrabilityReport conclusion;
};

struct ConvergenceReport {
    /// (t, distance of u(t) to the argmin affine set) over the tail.
    std::vector<std::pair<double, double>> dist_tail;
    double dist_final = 0.0;
    /// max ||u(2t) - u(t)|| over dyadic pairs whose endpoint lies in the
    /// last decade.
    double cauchy_defect = 0.0;
    Vec limit_point;
    double grad_norm_at_limit = 0.0;
    bool limit_in_argmin = false;
};

/// Throws EnergyUnderflow when E <= 1e-300 anywhere in the window (the decay
/// is superpolynomial; report that instead of a garbage slope).
RateReport fit_decay_rate(const Trajectory& traj, double window_decades = 1.0,
                          std::span<const double> probe_exponents = {});

/// Saturation report for the configured weighted-energy exponent r.
IntegrabilityReport energy_integrability(const Trajectory& traj, double r, double theta = 0.05);
/// Same for the weighted-speed exponent q.
IntegrabilityReport speed_integrability(const Trajectory& traj, double q, double theta = 0.05);

/// Both conclusions of the decay lemma for exponent r (premise saturation,
/// t^{1+r} E tail behavior, speed integral at r+1-alpha).
DecayLemmaReport check_decay_lemma(const Trajectory& traj, double r, double alpha, double theta = 0.05);

/// max over samples in [t_min, t_end] of  p'' + gamma p' - 1.5|u'|^2 + E,
/// with p'' and p' central differences at step resolution.
double check_anchor_inequality(const Trajectory& traj, const DampingSchedule& sched,
                               double t_min = 1.0);

/// Premise and conclusion saturation of the weight-raising implication:
/// requires nu < 2*alpha - 1 (BadExponent otherwise).
BootstrapReport check_bootstrap(const Trajectory& traj, double alpha, double nu,
                                double theta = 0.05);

/// Convergence of u(t) to the argmin set: tail distances, dyadic Cauchy
/// defect, and the gradient test at the endpoint.
ConvergenceReport check_convergence(const Trajectory& traj, const CompositePotential& problem,
                                    double grad_tol = 1e-6);

IntegrabilityReport check_speed_integrability(const Trajectory& traj, double alpha,
                                              double theta = 0.05);

/// max over consecutive samples of (E_{k+1} - E_k)/(t_{k+1} - t_k), clamped
/// at zero: the worst uphill-energy rate (0 for perfectly monotone runs).
double max_energy_uphill_rate(const Trajectory& traj);

} // namespace vanishdamp

#endif
