#include "vanishdamp/integrate.hpp"

#include <cmath>

namespace vanishdamp {

namespace {

// Extended-precision running sum. Adding a nonnegative increment never
// decreases the readout (rounding is monotone), which keeps the accumulator
// invariants bitwise and the tail-identity roundoff near 1e-13 relative even
// over 1e8 steps.
struct RunningSum {
    long double s = 0.0L;
    void add(double x) { s += x; }
    double value() const { return static_cast<double>(s); }
};

// gamma from log1p(t), so the integrator and step() share one evaluation
// path (exp, not pow) for power laws
inline double gamma_log(const DampingSchedule& sched, double L) {
    switch (sched.kind()) {
        case DampingKind::PowerLaw:
            return sched.alpha() == 0.0 ? sched.K() : sched.K() * std::exp(-sched.alpha() * L);
        case DampingKind::Constant:
            return sched.K();
        case DampingKind::Custom:
            return sched.gamma(std::expm1(L));
    }
    return 0.0;
}

// One kick-drift-kick update. grad holds A u + f(u) at the incoming u and is
// left holding it at the outgoing u; au is scratch for A u.
struct VerletCore {
    const CompositePotential& problem;
    const DampingSchedule& sched;
    Vec wm;  // scratch

    void refresh_force(const Vec& u, Vec& au, Vec& grad, double& quad, double& fval) const {
        problem.op().apply(u, au);
        quad = u.dot(au);
        grad = au;
        problem.pot().add_gradient(u, grad);
        fval = problem.pot().value(u);
    }

    void advance(double t, double h, Vec& u, Vec& w, Vec& au, Vec& grad, double& quad,
                 double& fval) {
        const double g = gamma_log(sched, std::log1p(t + 0.5 * h));
        const double e = 0.5 * h * g;
        wm = (1.0 - e) * w - (0.5 * h) * grad;
        u += h * wm;
        refresh_force(u, au, grad, quad, fval);
        w = (wm - (0.5 * h) * grad) / (1.0 + e);
    }
};

} // namespace

double max_stable_step(const OperatorSpec& op, double lipschitz_f) {
    return 0.5 / std::sqrt(op.operator_norm() + std::max(0.0, lipschitz_f));
}

StateVector step(const StateVector& state, double h, const CompositePotential& problem,
                 const DampingSchedule& sched) {
    if (!(h > 0.0)) throw Error("step size must be positive");
    if (!state.finite()) throw NonFinite("input state is not finite");
    VerletCore core{problem, sched, Vec()};
    Vec u = state.u, w = state.w, au, grad;
    double quad, fval;
    core.refresh_force(u, au, grad, quad, fval);
    core.advance(state.t, h, u, w, au, grad, quad, fval);
    StateVector out{state.t + h, std::move(u), std::move(w)};
    if (!out.finite())
        throw NonFinite("step produced NaN/Inf at t = " + std::to_string(out.t) +
                        " (step too large for the operator stiffness?)");
    return out;
}

EnergyRecord energy(const StateVector& state, const CompositePotential& problem,
                    const DampingSchedule& sched) {
    EnergyRecord rec;
    rec.t = state.t;
    rec.speed_sq = state.w.squaredNorm();
    rec.phi_gap = problem.phi_gap(state.u);
    rec.E = 0.5 * rec.speed_sq + rec.phi_gap;
    rec.gamma_t = sched.gamma(state.t);
    return rec;
}

Trajectory integrate(const CompositePotential& problem, const DampingSchedule& sched,
                     const StateVector& init, const IntegrateOptions& opts,
                     const std::string& problem_id) {
    const double h = opts.h;
    const double t0 = init.t;
    if (!(h > 0.0)) throw Error("step size must be positive");
    if (!(opts.t_end > t0)) throw Error("t_end must exceed the initial time");
    if (!init.finite()) throw NonFinite("initial state is not finite");
    if (init.u.size() != problem.op().n() || init.w.size() != problem.op().n())
        throw BadDimension("initial state dimension does not match the operator");
    if (!(opts.sample_ratio > 1.0)) throw Error("sample_ratio must be > 1");
    for (double r : opts.weighted_energy_exponents)
        if (r == -1.0) throw BadExponent("weighted-energy exponent r = -1 is excluded");

    const double hmax = max_stable_step(problem.op(), opts.lipschitz_f);
    if (h > hmax)
        throw StepTooLarge("h = " + std::to_string(h) + " exceeds h_max = " +
                           std::to_string(hmax));

    const long long nsteps = std::llround((opts.t_end - t0) / h);
    if (nsteps < 1) throw Error("fewer than one step between t0 and t_end");

    Vec anchor = opts.anchor.value_or(problem.minimizer());
    if (anchor.size() != problem.op().n()) throw BadDimension("anchor dimension mismatch");

    const std::vector<double>& rs = opts.weighted_energy_exponents;
    const std::vector<double>& qs = opts.weighted_speed_exponents;
    const std::size_t nr = rs.size(), nq = qs.size();

    RunningSum dissipation;
    std::vector<RunningSum> wE(nr), wS(nq);

    VerletCore core{problem, sched, Vec()};
    Vec u = init.u, w = init.w, au, grad;
    double quad, fval;
    core.refresh_force(u, au, grad, quad, fval);

    // per-endpoint integrand cache; Epos clamps the certificate-floor noise
    // (phi_gap may sit a hair below zero once the state outruns the
    // minimizer oracle) so the weighted-energy increments stay nonnegative
    struct Point {
        double t, L, gam, ss, E, Epos, phi_gap, p;
        std::vector<double> wr, wq;
    };
    auto fill_point = [&](Point& pt, double t, const Vec& uu, const Vec& ww, double qd,
                          double fv) {
        pt.t = t;
        pt.L = std::log1p(t);
        pt.gam = gamma_log(sched, pt.L);
        pt.ss = ww.squaredNorm();
        pt.phi_gap = 0.5 * qd + fv - problem.min_phi();
        pt.E = 0.5 * pt.ss + pt.phi_gap;
        pt.Epos = std::max(pt.E, 0.0);
        pt.p = 0.5 * (uu - anchor).squaredNorm();
        pt.wr.resize(nr);
        pt.wq.resize(nq);
        for (std::size_t i = 0; i < nr; ++i)
            pt.wr[i] = rs[i] == 0.0 ? 1.0 : std::exp(rs[i] * pt.L);
        for (std::size_t i = 0; i < nq; ++i)
            pt.wq[i] = qs[i] == 0.0 ? 1.0 : std::exp(qs[i] * pt.L);
    };

    Point prev, cur;
    fill_point(prev, t0, u, w, quad, fval);

    std::vector<TrajectorySample> samples;
    samples.reserve(64 +
                    static_cast<std::size_t>(std::log(std::max(2.0, opts.t_end)) /
                                             std::log(opts.sample_ratio)));

    auto snapshot = [&](const Point& pt, double dp) {
        AccumulatorSnapshot snap;
        snap.dissipation = dissipation.value();
        snap.weighted_energy.resize(nr);
        for (std::size_t i = 0; i < nr; ++i) snap.weighted_energy[i] = wE[i].value();
        snap.weighted_speed.resize(nq);
        for (std::size_t i = 0; i < nq; ++i) snap.weighted_speed[i] = wS[i].value();
        snap.p = pt.p;
        snap.dp = dp;
        return snap;
    };
    auto record = [&](const Point& pt, const Vec& uu, const Vec& ww, double dp, double p_minus,
                      bool have_minus) {
        TrajectorySample s;
        s.state = StateVector{pt.t, uu, ww};
        s.energy = EnergyRecord{pt.t, pt.E, pt.ss, pt.gam, pt.phi_gap};
        s.acc = snapshot(pt, dp);
        s.p_minus = have_minus ? p_minus : 0.0;
        s.p_plus = 0.0;
        s.p_triplet_valid = false;  // upgraded once p(t+h) is known
        return s;
    };

    samples.push_back(record(prev, u, w, 0.0, 0.0, false));
    long long pending = -1;  // sample index waiting for p_plus
    double next_target = std::max(opts.sample_start, t0 + h);

    for (long long n = 1; n <= nsteps; ++n) {
        // prev holds t_{n-1} here
        core.advance(prev.t, h, u, w, au, grad, quad, fval);
        if (!(u.allFinite() && w.allFinite()))
            throw NonFinite("integration produced NaN/Inf at t = " + std::to_string(prev.t + h) +
                            " (step too large for the operator stiffness?)");
        fill_point(cur, t0 + n * h, u, w, quad, fval);

        dissipation.add(0.5 * h * (prev.gam * prev.ss + cur.gam * cur.ss));
        for (std::size_t i = 0; i < nr; ++i)
            wE[i].add(0.5 * h * (prev.wr[i] * prev.Epos + cur.wr[i] * cur.Epos));
        for (std::size_t i = 0; i < nq; ++i)
            wS[i].add(0.5 * h * (prev.wq[i] * prev.ss + cur.wq[i] * cur.ss));

        if (pending >= 0) {
            samples[pending].p_plus = cur.p;
            samples[pending].p_triplet_valid = true;
            pending = -1;
        }

        if (cur.t >= next_target - 1e-12 || n == nsteps) {
            const double dp = (cur.p - prev.p) / h;
            samples.push_back(record(cur, u, w, dp, prev.p, true));
            pending = static_cast<long long>(samples.size()) - 1;
            while (next_target <= cur.t) next_target *= opts.sample_ratio;
        }
        std::swap(prev, cur);
    }

    if (pending >= 0) {
        // one extra step past t_end just to complete the final p triplet
        core.advance(t0 + nsteps * h, h, u, w, au, grad, quad, fval);
        if (u.allFinite()) {
            samples[pending].p_plus = 0.5 * (u - anchor).squaredNorm();
            samples[pending].p_triplet_valid = true;
        }
    }

    TrajectoryEcho echo;
    echo.problem_id = problem_id;
    echo.h = h;
    echo.t_end = opts.t_end;
    echo.sample_ratio = opts.sample_ratio;
    echo.weighted_energy_exponents = rs;
    echo.weighted_speed_exponents = qs;
    return Trajectory(std::move(samples), std::move(echo));
}

double dissipation_residual(const Trajectory& traj) {
    if (traj.empty()) throw Error("dissipation_residual needs a nonempty trajectory");
    const double e0 = traj.front().energy.E;
    double worst = 0.0;
    for (const auto& s : traj.samples())
        worst = std::max(worst, std::abs(s.energy.E - e0 + s.acc.dissipation));
    return worst;
}

} // namespace vanishdamp
