#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vanishdamp/analysis.hpp"
#include "vanishdamp/csvio.hpp"
#include "vanishdamp/integrate.hpp"
#include "vanishdamp/problems.hpp"
#include "vanishdamp/reference.hpp"

namespace py = pybind11;
using namespace vanishdamp;

namespace {

std::vector<double> column(const Trajectory& traj,
                           const std::function<double(const TrajectorySample&)>& pick) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& s : traj.samples()) out.push_back(pick(s));
    return out;
}

DampingSchedule schedule_from(const std::string& kind, double K, double alpha, double c,
                              double t0) {
    if (kind == "powerlaw") return DampingSchedule::power_law(K, alpha, t0);
    if (kind == "constant") return DampingSchedule::constant(c, t0);
    if (kind == "none") return DampingSchedule::constant(0.0, t0);
    throw Error("unknown schedule kind: " + kind);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulation and verification toolkit for u'' + gamma(t) u' + Au + f(u) = 0 "
              "with asymptotically vanishing damping";

    py::register_exception<Error>(m, "VanishdampError");

    py::class_<DampingSchedule>(m, "DampingSchedule")
        .def_static("power_law", &DampingSchedule::power_law, py::arg("K"), py::arg("alpha"),
                    py::arg("t0") = 0.0)
        .def_static("constant", &DampingSchedule::constant, py::arg("c"), py::arg("t0") = 0.0)
        .def("gamma", &DampingSchedule::gamma)
        .def("gamma_prime", &DampingSchedule::gamma_prime)
        .def_property_readonly("K", &DampingSchedule::K)
        .def_property_readonly("alpha", &DampingSchedule::alpha)
        .def("__repr__", [](const DampingSchedule& s) { return "<" + s.describe() + ">"; });

    py::class_<ProblemSpec>(m, "Problem")
        .def_readonly("id", &ProblemSpec::id)
        .def_property_readonly("n", &ProblemSpec::n)
        .def_property_readonly("matrix",
                               [](const ProblemSpec& p) { return p.op().matrix(); })
        .def_property_readonly("init_u", [](const ProblemSpec& p) { return p.init.u; })
        .def_property_readonly("init_w", [](const ProblemSpec& p) { return p.init.w; })
        .def_property_readonly("minimizer",
                               [](const ProblemSpec& p) { return p.certified.minimizer(); })
        .def_property_readonly("min_phi",
                               [](const ProblemSpec& p) { return p.certified.min_phi(); })
        .def_property_readonly("argmin_basis",
                               [](const ProblemSpec& p) { return p.certified.argmin_basis(); })
        .def_readonly("notes", &ProblemSpec::notes)
        .def_readonly("lipschitz_f", &ProblemSpec::lipschitz_f)
        .def("phi", [](const ProblemSpec& p, const Vec& u) { return p.certified.phi(u); })
        .def("grad_phi",
             [](const ProblemSpec& p, const Vec& u) { return p.certified.grad_phi(u); })
        .def("semi_coercivity",
             [](const ProblemSpec& p) {
                 auto c = validate_semi_coercivity(p.op());
                 return py::dict(py::arg("lambda_shift") = c.lambda, py::arg("mu") = c.mu,
                                 py::arg("smallest_eig_shifted") = c.smallest_eig_shifted);
             })
        .def("__repr__", [](const ProblemSpec& p) { return "<Problem " + p.id + ">"; });

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly(
            "t", [](const Trajectory& tr) { return column(tr, [](auto& s) { return s.state.t; }); })
        .def_property_readonly("energy",
                               [](const Trajectory& tr) {
                                   return column(tr, [](auto& s) { return s.energy.E; });
                               })
        .def_property_readonly("speed_sq",
                               [](const Trajectory& tr) {
                                   return column(tr, [](auto& s) { return s.energy.speed_sq; });
                               })
        .def_property_readonly("gamma",
                               [](const Trajectory& tr) {
                                   return column(tr, [](auto& s) { return s.energy.gamma_t; });
                               })
        .def_property_readonly("phi_gap",
                               [](const Trajectory& tr) {
                                   return column(tr, [](auto& s) { return s.energy.phi_gap; });
                               })
        .def_property_readonly("dissipation",
                               [](const Trajectory& tr) {
                                   return column(tr, [](auto& s) { return s.acc.dissipation; });
                               })
        .def_property_readonly(
            "p", [](const Trajectory& tr) { return column(tr, [](auto& s) { return s.acc.p; }); })
        .def("weighted_energy",
             [](const Trajectory& tr, double r) {
                 auto idx = tr.energy_exponent_index(r);
                 if (!idx) throw MissingAccumulator("exponent not configured");
                 return column(tr, [&](auto& s) { return s.acc.weighted_energy[*idx]; });
             })
        .def("weighted_speed",
             [](const Trajectory& tr, double q) {
                 auto idx = tr.speed_exponent_index(q);
                 if (!idx) throw MissingAccumulator("exponent not configured");
                 return column(tr, [&](auto& s) { return s.acc.weighted_speed[*idx]; });
             })
        .def_property_readonly("final_u", [](const Trajectory& tr) { return tr.back().state.u; })
        .def_property_readonly("final_w", [](const Trajectory& tr) { return tr.back().state.w; })
        .def("to_csv", [](const Trajectory& tr) { return trajectory_csv(tr); })
        .def("__len__", &Trajectory::size);

    py::class_<RateReport>(m, "RateReport")
        .def_readonly("fitted_exponent", &RateReport::fitted_exponent)
        .def_readonly("window_lo", &RateReport::window_lo)
        .def_readonly("window_hi", &RateReport::window_hi)
        .def_readonly("residual", &RateReport::residual)
        .def_readonly("samples_in_window", &RateReport::samples_in_window)
        .def_readonly("tail_sup", &RateReport::tail_sup);

    py::class_<IntegrabilityReport>(m, "IntegrabilityReport")
        .def_readonly("exponent", &IntegrabilityReport::exponent)
        .def_readonly("total", &IntegrabilityReport::total)
        .def_readonly("last_decade_share", &IntegrabilityReport::last_decade_share)
        .def_readonly("saturated", &IntegrabilityReport::saturated);

    py::class_<DecayLemmaReport>(m, "DecayLemmaReport")
        .def_readonly("r", &DecayLemmaReport::r)
        .def_readonly("premise_saturated", &DecayLemmaReport::premise_saturated)
        .def_readonly("tail_nonincreasing", &DecayLemmaReport::tail_nonincreasing)
        .def_readonly("tail_decade_ratio", &DecayLemmaReport::tail_decade_ratio)
        .def_readonly("premise", &DecayLemmaReport::premise)
        .def_readonly("conclusion_speed", &DecayLemmaReport::conclusion_speed);

    py::class_<BootstrapReport>(m, "BootstrapReport")
        .def_readonly("nu", &BootstrapReport::nu)
        .def_readonly("conclusion_exponent", &BootstrapReport::conclusion_exponent)
        .def_readonly("premise", &BootstrapReport::premise)
        .def_readonly("conclusion", &BootstrapReport::conclusion);

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("dist_final", &ConvergenceReport::dist_final)
        .def_readonly("cauchy_defect", &ConvergenceReport::cauchy_defect)
        .def_readonly("limit_point", &ConvergenceReport::limit_point)
        .def_readonly("grad_norm_at_limit", &ConvergenceReport::grad_norm_at_limit)
        .def_readonly("limit_in_argmin", &ConvergenceReport::limit_in_argmin);

    m.def("catalog", &catalog, "The built-in certified problems");
    m.def("problem", &catalog_problem, py::arg("id"));
    m.def(
        "build_wave_problem",
        [](int n, double length, const std::string& kind, double shift, double weight) {
            NodePotential np = NodePotential::Zero;
            if (kind == "quartic") np = NodePotential::Quartic;
            else if (kind == "logcosh") np = NodePotential::LogCosh;
            else if (kind != "zero") throw Error("unknown potential kind: " + kind);
            return build_wave_problem(n, length, np, shift, weight);
        },
        py::arg("n"), py::arg("length"), py::arg("potential") = "zero", py::arg("shift") = 0.0,
        py::arg("weight") = 1.0);

    m.def(
        "simulate",
        [](const ProblemSpec& p, const std::string& kind, double K, double alpha, double c,
           double t0, double h, double t_end, std::vector<double> r_list,
           std::vector<double> q_list, double sample_ratio) {
            DampingSchedule sched = schedule_from(kind, K, alpha, c, t0);
            IntegrateOptions o;
            o.h = h;
            o.t_end = t_end;
            o.sample_ratio = sample_ratio;
            o.weighted_energy_exponents = std::move(r_list);
            o.weighted_speed_exponents = std::move(q_list);
            o.lipschitz_f = p.lipschitz_f;
            return integrate(p.certified, sched, p.init, o, p.id);
        },
        py::arg("problem"), py::arg("schedule") = "powerlaw", py::arg("K") = 1.0,
        py::arg("alpha") = 0.5, py::arg("c") = 1.0, py::arg("t0") = 0.0, py::arg("h") = 1e-3,
        py::arg("t_end") = 1e3, py::arg("weighted_energy_r") = std::vector<double>{},
        py::arg("weighted_speed_q") = std::vector<double>{}, py::arg("sample_ratio") = 1.05,
        "Integrate the damped second-order system and collect accumulators");

    m.def(
        "reference_solve",
        [](const ProblemSpec& p, const std::string& kind, double K, double alpha, double c,
           double t0, double t_end, double rtol) {
            DampingSchedule sched = schedule_from(kind, K, alpha, c, t0);
            ReferenceOptions ro;
            ro.rtol = rtol;
            StateVector out = reference_integrate(p.certified, sched, p.init, t_end, ro);
            return py::make_tuple(out.u, out.w);
        },
        py::arg("problem"), py::arg("schedule") = "powerlaw", py::arg("K") = 1.0,
        py::arg("alpha") = 0.5, py::arg("c") = 1.0, py::arg("t0") = 0.0, py::arg("t_end") = 10.0,
        py::arg("rtol") = 1e-10, "Adaptive high-order reference endpoint (u, w)");

    m.def(
        "max_stable_step",
        [](const ProblemSpec& p) { return max_stable_step(p.op(), p.lipschitz_f); },
        py::arg("problem"));

    m.def(
        "fit_decay_rate",
        [](const Trajectory& tr, double decades, std::vector<double> probes) {
            return fit_decay_rate(tr, decades, probes);
        },
        py::arg("trajectory"), py::arg("window_decades") = 1.0,
        py::arg("probe_exponents") = std::vector<double>{1.0});

    m.def("energy_integrability", &energy_integrability, py::arg("trajectory"), py::arg("r"),
          py::arg("theta") = 0.05);
    m.def("speed_integrability", &speed_integrability, py::arg("trajectory"), py::arg("q"),
          py::arg("theta") = 0.05);
    m.def("check_decay_lemma", &check_decay_lemma, py::arg("trajectory"), py::arg("r"), py::arg("alpha"),
          py::arg("theta") = 0.05);
    m.def(
        "check_anchor_inequality",
        [](const Trajectory& tr, const std::string& kind, double K, double alpha, double c,
           double t0, double t_min) {
            return check_anchor_inequality(tr, schedule_from(kind, K, alpha, c, t0), t_min);
        },
        py::arg("trajectory"), py::arg("schedule") = "powerlaw", py::arg("K") = 1.0,
        py::arg("alpha") = 0.5, py::arg("c") = 1.0, py::arg("t0") = 0.0, py::arg("t_min") = 1.0);
    m.def("check_bootstrap", &check_bootstrap, py::arg("trajectory"), py::arg("alpha"),
          py::arg("nu"), py::arg("theta") = 0.05);
    m.def(
        "check_convergence",
        [](const Trajectory& tr, const ProblemSpec& p, double grad_tol) {
            return check_convergence(tr, p.certified, grad_tol);
        },
        py::arg("trajectory"), py::arg("problem"), py::arg("grad_tol") = 1e-6);
    m.def("check_speed_integrability", &check_speed_integrability, py::arg("trajectory"),
          py::arg("alpha"), py::arg("theta") = 0.05);
    m.def("dissipation_residual", &dissipation_residual, py::arg("trajectory"));

    m.def(
        "check_damping_hypothesis",
        [](const DampingSchedule& s, double K, double alpha, std::vector<double> grid) {
            auto rep = check_damping_hypothesis(s, K, alpha, grid);
            return py::make_tuple(rep.ok, rep.largest_admissible_K);
        },
        py::arg("schedule"), py::arg("K"), py::arg("alpha"),
        py::arg("grid") = default_time_grid());
    m.def(
        "check_derivative_condition",
        [](const DampingSchedule& s, double alpha, double t0, std::vector<double> grid) {
            return check_derivative_condition(s, alpha, t0, grid);
        },
        py::arg("schedule"), py::arg("alpha"), py::arg("t0") = 0.0,
        py::arg("grid") = default_time_grid());

    m.attr("__version__") = "0.1.0";
}
