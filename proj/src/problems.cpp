#include "vanishdamp/problems.hpp"

#include <cmath>
#include <numbers>

namespace vanishdamp {

namespace {

Vec sine_profile(int n, int mode, double amplitude) {
    Vec v(n);
    for (int i = 1; i <= n; ++i)
        v[i - 1] = amplitude * std::sin(mode * std::numbers::pi * i / (n + 1));
    return v;
}

} // namespace

ProblemSpec build_wave_problem(int n, double length, NodePotential kind, double shift,
                               double node_weight) {
    if (n < 2) throw BadDimension("wave problem needs n >= 2 interior nodes");
    if (!(length > 0.0)) throw BadDimension("domain length must be positive");
    const double dx = length / (n + 1);
    const double scale = 1.0 / (dx * dx);
    Vec diag = Vec::Constant(n, 2.0 * scale);
    Vec off = Vec::Constant(n - 1, -scale);
    OperatorSpec op = OperatorSpec::tridiagonal(diag, off, 0.0);

    PotentialSpec pot = PotentialSpec::zero();
    double lipschitz = 0.0;
    const double w = node_weight * dx;
    switch (kind) {
        case NodePotential::Zero:
            break;
        case NodePotential::Quartic:
            pot = PotentialSpec::quartic(Vec::Constant(n, shift), w);
            break;
        case NodePotential::LogCosh:
            pot = PotentialSpec::log_cosh(Vec::Constant(n, shift), w);
            lipschitz = w;
            break;
    }

    ProblemSpec p;
    // quartic: A u + w (u-c)^3 = 0 has its root between 0 and c per node;
    // zero is a usable warm start either way
    p.certified = CompositePotential::certify(std::move(op), std::move(pot), {},
                                              Vec::Zero(n));
    p.init = StateVector{0.0, sine_profile(n, 1, 1.0), Vec::Zero(n)};
    p.lipschitz_f = lipschitz;
    p.notes = {"wave discretization"};
    p.id = "wave-" + std::to_string(n);
    return p;
}

std::vector<ProblemSpec> catalog() {
    std::vector<ProblemSpec> out;

    {
        ProblemSpec p;
        Mat a(1, 1);
        a(0, 0) = 1.0;
        p.certified = CompositePotential::certify(OperatorSpec::dense(a, 0.0),
                                                  PotentialSpec::zero());
        p.id = "scalar-harmonic";
        p.init = StateVector{0.0, Vec::Constant(1, 1.0), Vec::Zero(1)};
        p.lipschitz_f = 0.0;
        p.notes = {"strongly convex"};
        out.push_back(std::move(p));
    }

    {
        ProblemSpec p = build_wave_problem(20, 1.0, NodePotential::Zero);
        p.id = "dirichlet-wave-20";
        // nonzero initial velocity exercises the kinetic term
        p.init = StateVector{0.0, sine_profile(20, 1, 1.0), sine_profile(20, 2, 0.5)};
        p.notes = {"strongly convex", "wave discretization"};
        out.push_back(std::move(p));
    }

    {
        ProblemSpec p = build_wave_problem(20, 1.0, NodePotential::Quartic, 1.0, 1.0);
        p.id = "semilinear-wave-20";
        p.init = StateVector{0.0, sine_profile(20, 1, 1.0), Vec::Zero(20)};
        // |u - 1|_inf stays below ~3 on unit-scale starts
        p.lipschitz_f = 12.0;
        p.notes = {"strongly convex", "wave discretization", "semilinear"};
        out.push_back(std::move(p));
    }

    {
        // A = diag(1, 0), quartic in coordinate 1 only: argmin = {0} x R
        Mat a = Mat::Zero(2, 2);
        a(0, 0) = 1.0;
        Mat flat(2, 1);
        flat << 0.0, 1.0;
        PotentialSpec pot = PotentialSpec::custom(
            [](const Vec& u) { return 0.25 * u[0] * u[0] * u[0] * u[0]; },
            [](const Vec& u) {
                Vec g = Vec::Zero(2);
                g[0] = u[0] * u[0] * u[0];
                return g;
            },
            "u1^4/4: convex, flat along e2", flat);
        ProblemSpec p;
        p.certified = CompositePotential::certify(OperatorSpec::dense(a, 1.0), std::move(pot),
                                                  {}, Vec::Zero(2));
        p.id = "degenerate-flat";
        Vec u0(2), w0(2);
        u0 << 1.5, 0.5;
        w0 << 0.0, 0.5;
        p.init = StateVector{0.0, u0, w0};
        p.lipschitz_f = 9.0;  // 3*u1^2 on the reachable range
        p.notes = {"semi-coercive degenerate", "flat directions"};
        out.push_back(std::move(p));
    }

    {
        ProblemSpec p = build_wave_problem(20, 1.0, NodePotential::Quartic, 1.0, 1.0);
        p.id = "far-start";
        // ||u(0)|| = 100 along the fundamental mode; initial data far from
        // the minimizer on purpose
        Vec u0 = sine_profile(20, 1, 1.0);
        u0 *= 100.0 / u0.norm();
        p.init = StateVector{0.0, u0, Vec::Zero(20)};
        // per-node quartic curvature 3*dx*(u-1)^2 along the reachable range
        p.lipschitz_f = 500.0;
        p.notes = {"strongly convex", "wave discretization", "semilinear", "far start"};
        out.push_back(std::move(p));
    }

    return out;
}

ProblemSpec catalog_problem(const std::string& id) {
    for (auto& p : catalog())
        if (p.id == id) return p;
    throw Error("unknown problem id: " + id);
}

} // namespace vanishdamp
