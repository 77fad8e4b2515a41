#include "vanishdamp/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "vanishdamp/csvio.hpp"
#include "vanishdamp/svg.hpp"

namespace vanishdamp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string SummaryRow::csv_header() {
    return "problem,alpha,K,h,t_end,fitted_exponent,fit_residual,superpolynomial,"
           "dissipation_residual,anchor_violation,we_saturated,ws_saturated,dist_to_argmin,"
           "status";
}

std::string SummaryRow::csv_row() const {
    std::string s;
    s += problem;
    s += ',' + format_double(alpha) + ',' + format_double(K) + ',' + format_double(h) + ',' +
         format_double(t_end);
    s += ',' + format_double(fitted_exponent) + ',' + format_double(fit_residual);
    s += superpolynomial ? ",1" : ",0";
    s += ',' + format_double(dissipation_res) + ',' + format_double(anchor_violation);
    s += ',' + we_saturated + ',' + ws_saturated;
    s += ',' + format_double(dist_to_argmin);
    s += ',' + status;
    return s;
}

double monotonicity_tol(const ProblemSpec& problem, double h, double E0, double factor) {
    const double stiffness = problem.op().operator_norm() + std::max(0.0, problem.lipschitz_f);
    return factor * h * h * (1.0 + E0) * stiffness;
}

std::string effective_out_dir(const std::string& configured) {
    if (const char* env = std::getenv("VANISHDAMP_OUT"); env && *env) return env;
    return configured;
}

AnalysisBundle analyse_trajectory(const Trajectory& traj, const ProblemSpec& problem,
                                  const DampingSchedule& sched, const RunConfig& rc) {
    AnalysisBundle out;
    out.E0 = traj.front().energy.E;
    out.E_end = traj.back().energy.E;

    std::vector<double> probes = {1.0};
    for (double ab : rc.alpha_bar_probes) probes.push_back(1.0 + ab);
    try {
        out.rate = fit_decay_rate(traj, rc.fit_window_decades, probes);
    } catch (const EnergyUnderflow&) {
        out.superpolynomial = true;
    } catch (const Error&) {
        // short runs may not fill the window; leave the rate empty
    }

    for (double r : traj.echo().weighted_energy_exponents)
        out.weighted_energy.push_back(energy_integrability(traj, r, rc.saturation_theta));
    for (double q : traj.echo().weighted_speed_exponents)
        out.weighted_speed.push_back(speed_integrability(traj, q, rc.saturation_theta));

    out.anchor_violation = check_anchor_inequality(traj, sched, 1.0);
    out.convergence = check_convergence(traj, problem.certified, 1e-6);
    out.dissipation_res = dissipation_residual(traj);
    out.uphill_rate = max_energy_uphill_rate(traj);
    return out;
}

namespace {

std::string saturation_flags(const std::vector<IntegrabilityReport>& reps, char tag) {
    std::string s;
    for (const auto& r : reps) {
        if (!s.empty()) s += ';';
        s += tag;
        s += format_double(r.exponent) + ':' + (r.saturated ? '1' : '0');
    }
    return s;
}

json report_json(const RunConfig& rc, const ProblemSpec& problem, const Trajectory& traj,
                 const AnalysisBundle& a, const json& checks) {
    json j;
    j["problem"] = {{"id", problem.id},
                    {"n", problem.n()},
                    {"lambda", problem.op().lambda_shift()},
                    {"mu", problem.op().mu()},
                    {"smallest_eig", problem.op().smallest_eig()},
                    {"min_phi", problem.certified.min_phi()},
                    {"notes", problem.notes}};
    j["schedule"] = {{"kind", rc.schedule.kind},
                     {"K", rc.schedule.K},
                     {"alpha", rc.schedule.alpha},
                     {"c", rc.schedule.constant},
                     {"t0", rc.schedule.t0}};
    j["integrator"] = {{"scheme", traj.echo().scheme},
                       {"h", rc.h},
                       {"t_end", rc.t_end},
                       {"sample_ratio", rc.sample_ratio},
                       {"samples", traj.size()}};
    j["energy"] = {{"E0", a.E0}, {"E_end", a.E_end}};
    if (a.rate) {
        json ts = json::array();
        for (auto& [s, v] : a.rate->tail_sup) ts.push_back({{"s", s}, {"sup", v}});
        j["rate"] = {{"fitted_exponent", a.rate->fitted_exponent},
                     {"residual", a.rate->residual},
                     {"window", {a.rate->window_lo, a.rate->window_hi}},
                     {"samples", a.rate->samples_in_window},
                     {"tail_sup", ts}};
    }
    j["superpolynomial"] = a.superpolynomial;
    auto integ = [](const std::vector<IntegrabilityReport>& reps) {
        json arr = json::array();
        for (const auto& r : reps)
            arr.push_back({{"exponent", r.exponent},
                           {"total", r.total},
                           {"last_decade_share", r.last_decade_share},
                           {"saturated", r.saturated}});
        return arr;
    };
    j["weighted_energy"] = integ(a.weighted_energy);
    j["weighted_speed"] = integ(a.weighted_speed);
    j["anchor_violation"] = a.anchor_violation;
    if (a.convergence) {
        j["convergence"] = {{"dist_to_argmin", a.convergence->dist_final},
                            {"cauchy_defect", a.convergence->cauchy_defect},
                            {"grad_norm_at_limit", a.convergence->grad_norm_at_limit},
                            {"limit_in_argmin", a.convergence->limit_in_argmin}};
    }
    j["dissipation_residual"] = a.dissipation_res;
    j["max_energy_uphill_rate"] = a.uphill_rate;
    j["checks"] = checks;
    return j;
}

} // namespace

RunResult execute_run(const RunConfig& rc, const std::string& out_dir, std::ostream* log) {
    RunResult res;
    ProblemSpec problem = rc.resolve_problem();
    DampingSchedule sched = rc.schedule.build();

    res.row.problem = problem.id;
    res.row.alpha = rc.schedule.kind == "powerlaw" ? rc.schedule.alpha : 0.0;
    res.row.K = rc.schedule.kind == "powerlaw" ? rc.schedule.K
                : rc.schedule.kind == "constant" ? rc.schedule.constant
                                                 : 0.0;
    res.row.h = rc.h;
    res.row.t_end = rc.t_end;

    IntegrateOptions opts;
    opts.h = rc.h;
    opts.t_end = rc.t_end;
    opts.sample_ratio = rc.sample_ratio;
    opts.weighted_energy_exponents = rc.weighted_energy_exponents;
    opts.weighted_speed_exponents = rc.weighted_speed_exponents;
    opts.lipschitz_f = problem.lipschitz_f;

    Trajectory traj;
    try {
        traj = integrate(problem.certified, sched, problem.init, opts, problem.id);
    } catch (const NonFinite& e) {
        res.exit_code = 3;
        res.row.status = std::string("nonfinite: ") + e.what();
        if (log) *log << "integration failed: " << e.what() << "\n";
        return res;
    }

    res.analysis = analyse_trajectory(traj, problem, sched, rc);
    const AnalysisBundle& a = res.analysis;

    if (a.rate) {
        res.row.fitted_exponent = a.rate->fitted_exponent;
        res.row.fit_residual = a.rate->residual;
    }
    res.row.superpolynomial = a.superpolynomial;
    res.row.dissipation_res = a.dissipation_res;
    res.row.anchor_violation = a.anchor_violation;
    res.row.we_saturated = saturation_flags(a.weighted_energy, 'r');
    res.row.ws_saturated = saturation_flags(a.weighted_speed, 'q');
    if (a.convergence) res.row.dist_to_argmin = a.convergence->dist_final;

    // assertion-class checks
    const double diss_tol = rc.dissipation_tol_factor * std::max(a.E0, 1e-300) * rc.t_end;
    const double anchor_tol = rc.anchor_tol_factor * (1.0 + a.E0);
    const double uphill_tol = monotonicity_tol(problem, rc.h, a.E0, rc.monotonicity_tol_factor);
    const bool diss_ok = a.dissipation_res <= diss_tol;
    const bool anchor_ok = a.anchor_violation <= anchor_tol;
    const bool mono_ok = a.uphill_rate <= uphill_tol;

    json checks = {{"enabled", rc.checks_enabled},
                   {"dissipation", {{"value", a.dissipation_res}, {"tol", diss_tol}, {"pass", diss_ok}}},
                   {"anchor", {{"value", a.anchor_violation}, {"tol", anchor_tol}, {"pass", anchor_ok}}},
                   {"monotonicity", {{"value", a.uphill_rate}, {"tol", uphill_tol}, {"pass", mono_ok}}}};

    fs::create_directories(out_dir);
    if (rc.write_trajectory) {
        std::ofstream f(fs::path(out_dir) / "trajectory.csv", std::ios::binary);
        write_trajectory_csv(traj, f);
        res.artifacts.push_back("trajectory.csv");
    }
    {
        std::ofstream f(fs::path(out_dir) / "report.json", std::ios::binary);
        f << report_json(rc, problem, traj, a, checks).dump(2) << "\n";
        res.artifacts.push_back("report.json");
    }
    {
        std::ofstream f(fs::path(out_dir) / "summary.csv", std::ios::binary);
        f << SummaryRow::csv_header() << "\n" << res.row.csv_row() << "\n";
        res.artifacts.push_back("summary.csv");
    }
    if (rc.emit_svg) {
        std::ofstream f(fs::path(out_dir) / "run.svg", std::ios::binary);
        write_loglog_svg(traj, rc.alpha_bar_probes, f);
        res.artifacts.push_back("run.svg");
    }

    if (rc.checks_enabled && !(diss_ok && anchor_ok && mono_ok)) {
        res.exit_code = 2;
        res.row.status = "check-failed";
        if (log) {
            if (!diss_ok)
                *log << "dissipation residual " << a.dissipation_res << " > tol " << diss_tol
                     << "\n";
            if (!anchor_ok)
                *log << "anchor violation " << a.anchor_violation << " > tol " << anchor_tol
                     << "\n";
            if (!mono_ok)
                *log << "energy uphill rate " << a.uphill_rate << " > tol " << uphill_tol << "\n";
        }
    }
    if (log)
        *log << problem.id << ": E0=" << a.E0 << " E_end=" << a.E_end
             << " dissipation_residual=" << a.dissipation_res << " exit=" << res.exit_code
             << "\n";
    return res;
}

} // namespace vanishdamp
