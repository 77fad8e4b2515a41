#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vanishdamp/csvio.hpp"
#include "vanishdamp/runner.hpp"
#include "vanishdamp/sweep.hpp"
#include "vanishdamp/verify.hpp"

using namespace vanishdamp;

namespace {

int cmd_simulate(const std::string& config_path) {
    RunConfig rc = RunConfig::from_config(ConfigFile::load(config_path));
    RunResult res = execute_run(rc, effective_out_dir(rc.out_dir), &std::cout);
    return res.exit_code;
}

int cmd_sweep(const std::string& config_path) {
    SweepConfig sc = SweepConfig::from_config(ConfigFile::load(config_path));
    SweepOutcome out = run_sweep(sc, effective_out_dir(sc.base.out_dir), &std::cout);
    std::cout << out.rows.size() << " cells, " << out.failed_cells << " failed; summary at "
              << out.summary_path << "\n";
    return 0;  // per-cell failures live in the status column
}

int cmd_verify(const std::string& only, int workers) {
    VerifyOptions opts;
    opts.only = only;
    opts.workers = workers;
    auto results = run_acceptance(opts, &std::cout);
    if (results.empty()) {
        std::cerr << "no criteria matched --only " << only << "\n";
        return 1;
    }
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << "\n";
    return failed == 0 ? 0 : 1;
}

int cmd_rates(const std::string& csv_path, double window_decades) {
    std::ifstream f(csv_path);
    if (!f) {
        std::cerr << "cannot open " << csv_path << "\n";
        return 1;
    }
    Trajectory traj = read_trajectory_csv(f);
    try {
        RateReport rep = fit_decay_rate(traj, window_decades, std::vector<double>{1.0});
        std::cout << "fitted_exponent = " << format_double(rep.fitted_exponent) << "\n"
                  << "window = [" << format_double(rep.window_lo) << ", "
                  << format_double(rep.window_hi) << "] (" << rep.samples_in_window
                  << " samples)\n"
                  << "residual = " << format_double(rep.residual) << "\n";
        for (auto& [s, v] : rep.tail_sup)
            std::cout << "tail_sup[t^" << format_double(s) << " E] = " << format_double(v) << "\n";
    } catch (const EnergyUnderflow& e) {
        std::cout << "superpolynomial decay detected: " << e.what() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vanishdamp: simulation and verification of damped second-order dynamics "
                 "u'' + gamma(t) u' + Au + f(u) = 0 with vanishing damping"};
    app.require_subcommand(1);

    std::string config_path, only, csv_path;
    int workers = 0;
    double window_decades = 1.0;

    auto* sim = app.add_subcommand("simulate", "run one configuration and write artifacts");
    sim->add_option("config", config_path, "run config file")->required();

    auto* swp = app.add_subcommand("sweep", "cartesian sweep over (problem, alpha, K)");
    swp->add_option("config", config_path, "sweep config file")->required();

    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    ver->add_option("--only", only, "restrict to one criterion group or id");
    ver->add_option("--workers", workers, "worker pool size (default: hardware)");

    auto* rat = app.add_subcommand("rates", "fit a decay exponent from a trajectory csv");
    rat->add_option("trajectory", csv_path, "trajectory.csv produced by simulate")->required();
    rat->add_option("--window-decades", window_decades, "tail window length in decades");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path);
        if (swp->parsed()) return cmd_sweep(config_path);
        if (ver->parsed()) return cmd_verify(only, workers);
        if (rat->parsed()) return cmd_rates(csv_path, window_decades);
    } catch (const NonFinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
