"""Simulation and numerical verification of the damped second-order system
u'' + gamma(t) u' + Au + f(u) = 0 with asymptotically vanishing damping.

The compiled core exposes the certified problem catalog, the fixed-step
damped-Verlet integrator with on-the-fly weighted accumulators, the adaptive
reference integrator, and the decay/integrability/convergence checkers.
"""

from ._core import (
    BootstrapReport,
    ConvergenceReport,
    DampingSchedule,
    IntegrabilityReport,
    DecayLemmaReport,
    Problem,
    RateReport,
    Trajectory,
    VanishdampError,
    build_wave_problem,
    catalog,
    check_anchor_inequality,
    check_bootstrap,
    check_convergence,
    check_damping_hypothesis,
    check_derivative_condition,
    check_decay_lemma,
    check_speed_integrability,
    dissipation_residual,
    energy_integrability,
    fit_decay_rate,
    max_stable_step,
    problem,
    reference_solve,
    simulate,
    speed_integrability,
)

__version__ = "0.1.0"

__all__ = [
    "BootstrapReport",
    "ConvergenceReport",
    "DampingSchedule",
    "IntegrabilityReport",
    "DecayLemmaReport",
    "Problem",
    "RateReport",
    "Trajectory",
    "VanishdampError",
    "build_wave_problem",
    "catalog",
    "check_anchor_inequality",
    "check_bootstrap",
    "check_convergence",
    "check_damping_hypothesis",
    "check_derivative_condition",
    "check_decay_lemma",
    "check_speed_integrability",
    "dissipation_residual",
    "energy_integrability",
    "fit_decay_rate",
    "max_stable_step",
    "problem",
    "reference_solve",
    "simulate",
    "speed_integrability",
]
