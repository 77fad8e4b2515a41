#include "vanishdamp/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace vanishdamp {

namespace {

constexpr double kUnderflowFloor = 1e-300;

IntegrabilityReport integrability_from(const Trajectory& traj, double exponent,
                                       std::size_t column, bool energy_kind, double theta) {
    IntegrabilityReport rep;
    rep.exponent = exponent;
    const auto& s = traj.samples();
    rep.increments.reserve(s.size() > 0 ? s.size() - 1 : 0);
    auto value = [&](std::size_t i) {
        return energy_kind ? s[i].acc.weighted_energy[column] : s[i].acc.weighted_speed[column];
    };
    for (std::size_t i = 1; i < s.size(); ++i)
        rep.increments.push_back(std::max(0.0, value(i) - value(i - 1)));
    rep.total = s.empty() ? 0.0 : value(s.size() - 1);

    if (rep.total <= 0.0) {
        rep.last_decade_share = 0.0;
        rep.saturated = true;  // nothing accumulated at all
        return rep;
    }
    const double t_end = s.back().state.t;
    const std::size_t i0 = traj.at_or_before(t_end / 10.0);
    rep.last_decade_share = std::max(0.0, (rep.total - value(i0)) / rep.total);
    rep.saturated = rep.last_decade_share <= theta;
    return rep;
}

} // namespace

RateReport fit_decay_rate(const Trajectory& traj, double window_decades,
                          std::span<const double> probe_exponents) {
    if (traj.size() < 2) throw Error("fit_decay_rate needs a populated trajectory");
    const double t_hi = traj.back().state.t;
    // tail only: never look back more than two decades
    const double decades = std::clamp(window_decades, 0.1, 2.0);
    const double t_lo = t_hi / std::pow(10.0, decades);

    std::vector<double> xs, ys;
    RateReport rep;
    rep.window_lo = t_lo;
    rep.window_hi = t_hi;
    for (const auto& s : traj.samples()) {
        const double t = s.state.t;
        if (t < t_lo || t <= 0.0) continue;
        const double E = s.energy.E;
        if (E <= kUnderflowFloor)
            throw EnergyUnderflow("E = " + std::to_string(E) + " at t = " + std::to_string(t) +
                                  " inside the fit window (superpolynomial decay)");
        xs.push_back(std::log(t));
        ys.push_back(std::log(E));
    }
    rep.samples_in_window = static_cast<int>(xs.size());
    if (rep.samples_in_window < 20)
        throw Error("fit window holds " + std::to_string(xs.size()) + " samples; need >= 20");

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw Error("degenerate fit window");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    rep.fitted_exponent = -slope;

    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        rss += r * r;
    }
    rep.residual = std::sqrt(rss / n);

    for (double sexp : probe_exponents) {
        double sup = 0.0;
        for (const auto& s : traj.samples()) {
            const double t = s.state.t;
            if (t < t_lo || t <= 0.0) continue;
            sup = std::max(sup, std::pow(t, sexp) * s.energy.E);
        }
        rep.tail_sup.emplace_back(sexp, sup);
    }
    return rep;
}

IntegrabilityReport energy_integrability(const Trajectory& traj, double r, double theta) {
    auto idx = traj.energy_exponent_index(r);
    if (!idx)
        throw MissingAccumulator("run was not configured with weighted-energy exponent r = " +
                                 std::to_string(r));
    return integrability_from(traj, r, *idx, true, theta);
}

IntegrabilityReport speed_integrability(const Trajectory& traj, double q, double theta) {
    auto idx = traj.speed_exponent_index(q);
    if (!idx)
        throw MissingAccumulator("run was not configured with weighted-speed exponent q = " +
                                 std::to_string(q));
    return integrability_from(traj, q, *idx, false, theta);
}

DecayLemmaReport check_decay_lemma(const Trajectory& traj, double r, double alpha, double theta) {
    if (r == -1.0) throw BadExponent("r = -1 is excluded from the decay lemma");
    DecayLemmaReport rep;
    rep.r = r;
    rep.premise = energy_integrability(traj, r, theta);
    rep.premise_saturated = rep.premise.saturated;

    const double t_end = traj.back().state.t;
    const double t_lo = t_end / 10.0;
    bool nonincreasing = true;
    double first = 0.0, last = 0.0;
    bool have_first = false;
    for (const auto& s : traj.samples()) {
        const double t = s.state.t;
        if (t < t_lo || t <= 0.0) continue;
        // energies below zero sit under the minimizer certificate's
        // resolution and count as fully decayed
        const double v = std::pow(t, 1.0 + r) * std::max(s.energy.E, 0.0);
        if (have_first && v > last * (1.0 + 1e-9) + 1e-300) nonincreasing = false;
        if (!have_first) {
            first = v;
            have_first = true;
        }
        last = v;
        rep.conclusion_decay.emplace_back(t, v);
    }
    rep.tail_nonincreasing = nonincreasing;
    rep.tail_decade_ratio = (first > 0.0) ? last / first : (last > 0.0 ? 1.0 : 0.0);

    rep.conclusion_speed = speed_integrability(traj, r + 1.0 - alpha, theta);
    return rep;
}

double check_anchor_inequality(const Trajectory& traj, const DampingSchedule& sched,
                               double t_min) {
    const double h = traj.echo().h;
    if (!(h > 0.0)) throw Error("trajectory carries no step size");
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& s : traj.samples()) {
        if (!s.p_triplet_valid || s.state.t < t_min) continue;
        const double pdd = (s.p_plus - 2.0 * s.acc.p + s.p_minus) / (h * h);
        const double pd = (s.p_plus - s.p_minus) / (2.0 * h);
        const double g = sched.gamma(s.state.t);
        const double violation = pdd + g * pd - 1.5 * s.energy.speed_sq + s.energy.E;
        worst = std::max(worst, violation);
        any = true;
    }
    return any ? worst : 0.0;
}

BootstrapReport check_bootstrap(const Trajectory& traj, double alpha, double nu, double theta) {
    if (!(nu < 2.0 * alpha - 1.0))
        throw BadExponent("bootstrap requires nu < 2*alpha - 1 (nu = " + std::to_string(nu) +
                          ", alpha = " + std::to_string(alpha) + ")");
    BootstrapReport rep;
    rep.nu = nu;
    rep.conclusion_exponent = nu + 1.0 - alpha;
    rep.premise = energy_integrability(traj, nu, theta);
    rep.conclusion = energy_integrability(traj, rep.conclusion_exponent, theta);
    return rep;
}

ConvergenceReport check_convergence(const Trajectory& traj, const CompositePotential& problem,
                                    double grad_tol) {
    if (traj.empty()) throw Error("check_convergence needs a nonempty trajectory");
    ConvergenceReport rep;
    const Mat& basis = problem.argmin_basis();
    const Vec& vstar = problem.minimizer();

    auto dist_to_argmin = [&](const Vec& u) {
        Vec d = u - vstar;
        if (basis.cols() > 0) d -= basis * (basis.transpose() * d);
        return d.norm();
    };

    const double t_end = traj.back().state.t;
    const double t_tail = t_end / 100.0;
    for (const auto& s : traj.samples()) {
        if (s.state.t < t_tail) continue;
        rep.dist_tail.emplace_back(s.state.t, dist_to_argmin(s.state.u));
    }
    rep.dist_final = dist_to_argmin(traj.back().state.u);

    // dyadic pairs (t, 2t) with 2t in the last decade
    double defect = 0.0;
    for (const auto& s : traj.samples()) {
        const double t = s.state.t;
        if (t <= 0.0 || 2.0 * t > t_end * 1.0001) continue;
        if (2.0 * t < t_end / 10.0) continue;
        const auto& twin = traj[traj.nearest(2.0 * t)];
        defect = std::max(defect, (twin.state.u - s.state.u).norm());
    }
    rep.cauchy_defect = defect;

    rep.limit_point = traj.back().state.u;
    rep.grad_norm_at_limit = problem.grad_phi(rep.limit_point).norm();
    rep.limit_in_argmin = rep.grad_norm_at_limit <= grad_tol;
    return rep;
}

IntegrabilityReport check_speed_integrability(const Trajectory& traj, double alpha,
                                              double theta) {
    return speed_integrability(traj, alpha, theta);
}

double max_energy_uphill_rate(const Trajectory& traj) {
    double worst = 0.0;
    const auto& s = traj.samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double dt = s[i].state.t - s[i - 1].state.t;
        if (dt <= 0.0) continue;
        worst = std::max(worst, (s[i].energy.E - s[i - 1].energy.E) / dt);
    }
    return worst;
}

} // namespace vanishdamp
