#ifndef VANISHDAMP_RUNNER_HPP
#define VANISHDAMP_RUNNER_HPP

#include <iosfwd>
#include <optional>

#include "vanishdamp/analysis.hpp"
#include "vanishdamp/config.hpp"
#include "vanishdamp/integrate.hpp"

namespace vanishdamp {

/// Everything the analysis layer produced for one run.
struct AnalysisBundle {
    bool superpolynomial = false;
    std::optional<RateReport> rate;
    std::vector<IntegrabilityReport> weighted_energy;
    std::vector<IntegrabilityReport> weighted_speed;
    double anchor_violation = 0.0;
    std::optional<ConvergenceReport> convergence;
    double dissipation_res = 0.0;
    double uphill_rate = 0.0;
    double E0 = 0.0, E_end = 0.0;
};

/// Flat per-run summary line for sweep aggregation.
struct SummaryRow {
    std::string problem;
    double alpha = 0.0, K = 0.0, h = 0.0, t_end = 0.0;
    double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    double fit_residual = std::numeric_limits<double>::quiet_NaN();
    bool superpolynomial = false;
    double dissipation_res = std::numeric_limits<double>::quiet_NaN();
    double anchor_violation = std::numeric_limits<double>::quiet_NaN();
    std::string we_saturated, ws_saturated;  // "r-0.5:1;r0:1" style flags
    double dist_to_argmin = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";

    static std::string csv_header();
    std::string csv_row() const;
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 2 check failed, 3 non-finite integration
    AnalysisBundle analysis;
    SummaryRow row;
    std::vector<std::string> artifacts;
};

/// Analyse an existing trajectory with the run's analysis settings.
AnalysisBundle analyse_trajectory(const Trajectory& traj, const ProblemSpec& problem,
                                  const DampingSchedule& sched, const RunConfig& rc);

/// Integrate + analyse + write artifacts under out_dir (trajectory.csv,
/// report.json, summary.csv, run.svg). Returns exit 2 when an enabled
/// assertion-class check misses its tolerance, 3 on NonFinite.
RunResult execute_run(const RunConfig& rc, const std::string& out_dir, std::ostream* log);

/// Monotonicity tolerance tol_E per unit time for a given run.
double monotonicity_tol(const ProblemSpec& problem, double h, double E0, double factor);

/// The VANISHDAMP_OUT environment variable overrides the configured
/// output directory.
std::string effective_out_dir(const std::string& configured);

} // namespace vanishdamp

#endif
