#include "vanishdamp/reference.hpp"

#include <cmath>

namespace vanishdamp {

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// embedded 4th-order weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

} // namespace

StateVector reference_integrate(const CompositePotential& problem, const DampingSchedule& sched,
                                const StateVector& init, double t_end,
                                const ReferenceOptions& opts) {
    if (!init.finite()) throw NonFinite("reference: initial state is not finite");
    if (!(t_end > init.t)) throw Error("reference: t_end must exceed the initial time");

    const int n = static_cast<int>(init.u.size());
    const int dim = 2 * n;
    using V = Eigen::VectorXd;

    V y(dim);
    y.head(n) = init.u;
    y.tail(n) = init.w;

    Vec grad(n);
    auto rhs = [&](double t, const V& s, V& out) {
        const auto u = s.head(n);
        const auto w = s.tail(n);
        problem.op().apply(u, grad);
        problem.pot().add_gradient(u, grad);
        out.head(n) = w;
        out.tail(n) = -sched.gamma(t) * w - grad;
    };

    double t = init.t;
    V k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim), ynew(dim);
    rhs(t, y, k1);

    // initial step from the derivative scale
    double h = 1e-4 * std::max(1.0, t_end - t) /
               std::max(1.0, k1.cwiseAbs().maxCoeff());
    h = std::min(h, t_end - t);

    long steps = 0;
    double err_prev = 1.0;
    while (t < t_end) {
        if (++steps > opts.max_steps) throw NoConvergence("reference integrator step budget hit");
        if (t + h > t_end) h = t_end - t;

        ytmp = y + h * (a21 * k1);
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);

        // scaled rms of the 5th-4th difference
        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double e4th = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                            e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double d = (ynew[i] - e4th) / sc;
            err += d * d;
        }
        err = std::sqrt(err / dim);

        if (!std::isfinite(err)) {
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-10);
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }

    StateVector out;
    out.t = t;
    out.u = y.head(n);
    out.w = y.tail(n);
    if (!out.finite()) throw NonFinite("reference integration diverged");
    return out;
}

} // namespace vanishdamp
