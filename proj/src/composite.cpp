#include "vanishdamp/composite.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace vanishdamp {

namespace {

double eval_phi(const OperatorSpec& op, const PotentialSpec& pot, const Vec& u) {
    return 0.5 * op.quad(u) + pot.value(u);
}

Vec eval_grad(const OperatorSpec& op, const PotentialSpec& pot, const Vec& u) {
    Vec g = op.apply(u);
    pot.add_gradient(u, g);
    return g;
}

/// Intersection of span(A_basis) and span(B_basis), both with orthonormal
/// columns; computed from the null space of [A | -B].
Mat subspace_intersection(const Mat& a, const Mat& b) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() == 0 || b.cols() == 0) return Mat(n, 0);
    Mat stacked(n, a.cols() + b.cols());
    stacked << a, -b;
    Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
    const double tol = 1e-10 * std::max<double>(1.0, svd.singularValues()[0]);
    Mat inter(n, std::min(a.cols(), b.cols()));
    int k = 0;
    for (int i = 0; i < svd.matrixV().cols(); ++i) {
        if (i < svd.singularValues().size() && svd.singularValues()[i] > tol) continue;
        const Vec x = svd.matrixV().col(i).head(a.cols());
        Vec dir = a * x;
        if (dir.norm() > 1e-10) inter.col(k++) = dir / dir.norm();
    }
    inter.conservativeResize(n, k);
    if (k > 1) {
        Eigen::HouseholderQR<Mat> qr(inter);
        Mat q = qr.householderQ() * Mat::Identity(n, k);
        return q;
    }
    return inter;
}

Mat flat_subspace_of_argmin(const OperatorSpec& op, const PotentialSpec& pot) {
    switch (pot.flatness()) {
        case PotentialSpec::Flatness::All:
            return op.kernel_basis();
        case PotentialSpec::Flatness::None:
            return Mat(op.n(), 0);
        case PotentialSpec::Flatness::Subspace: {
            Mat ker = op.kernel_basis();
            // orthonormalize the declared flat directions first
            Mat b = pot.flat_subspace();
            if (b.cols() > 0) {
                Eigen::HouseholderQR<Mat> qr(b);
                b = qr.householderQ() * Mat::Identity(b.rows(), std::min(b.rows(), b.cols()));
            }
            return subspace_intersection(ker, b);
        }
    }
    return Mat(op.n(), 0);
}

} // namespace

MinimizeResult minimize_phi(const OperatorSpec& op, const PotentialSpec& pot, const Vec& start,
                            const MinimizeOptions& opts) {
    const double eps_crit = opts.eps_crit_scale * (1.0 + op.operator_norm());

    if (pot.kind() == PotentialKind::Zero) {
        // phi = 0.5<Au,u> with A PSD: minimized at the origin.
        Vec u = Vec::Zero(op.n());
        return MinimizeResult{u, 0.0, 0, 0.0};
    }

    double L = opts.lipschitz_hint > 0.0
                   ? opts.lipschitz_hint
                   : op.operator_norm() +
                         std::max(1.0, std::isnan(pot.lipschitz_bound(1.0))
                                           ? 1.0
                                           : pot.lipschitz_bound(1.0 + start.norm()));

    Vec x = start;
    Vec y = x;
    double fx = eval_phi(op, pot, x);
    double theta = 1.0;
    Vec g;
    for (long it = 0; it < opts.max_iterations; ++it) {
        g = eval_grad(op, pot, y);
        const double gy_norm = g.norm();
        double fy = eval_phi(op, pot, y);

        // backtracking on the curvature estimate
        Vec xn;
        double fxn;
        for (;;) {
            xn = y - g / L;
            fxn = eval_phi(op, pot, xn);
            if (fxn <= fy - 0.5 * g.squaredNorm() / L || L > 1e18) break;
            L *= 2.0;
        }

        const double gn = eval_grad(op, pot, xn).norm();
        if (gn <= eps_crit)
            return MinimizeResult{xn, eval_phi(op, pot, xn), it + 1, gn};

        // function-value restart keeps the momentum honest on strongly
        // convex problems
        if (fxn > fx) {
            y = x;
            theta = 1.0;
            continue;
        }
        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        y = xn + ((theta - 1.0) / theta_next) * (xn - x);
        x = xn;
        fx = fxn;
        theta = theta_next;
        (void)gy_norm;
    }
    throw NoConvergence("minimize_phi: gradient norm did not reach " + std::to_string(eps_crit) +
                        " within " + std::to_string(opts.max_iterations) + " iterations");
}

CompositePotential CompositePotential::certify(OperatorSpec op, PotentialSpec pot,
                                               const MinimizeOptions& opts,
                                               std::optional<Vec> analytic_minimizer) {
    CompositePotential cp;
    cp.eps_crit_ = opts.eps_crit_scale * (1.0 + op.operator_norm());

    Vec candidate;
    if (analytic_minimizer) {
        candidate = std::move(*analytic_minimizer);
        if (candidate.size() != op.n()) throw BadDimension("analytic minimizer has wrong size");
        const double gn = eval_grad(op, pot, candidate).norm();
        if (gn > cp.eps_crit_) {
            // refine: the declared point is a warm start, not a certificate
            candidate = minimize_phi(op, pot, candidate, opts).minimizer;
        }
    } else {
        candidate = minimize_phi(op, pot, Vec::Zero(op.n()), opts).minimizer;
    }

    const double gn = eval_grad(op, pot, candidate).norm();
    if (gn > cp.eps_crit_)
        throw NoConvergence("minimizer certificate failed: ||grad phi|| = " + std::to_string(gn));

    cp.min_phi_ = eval_phi(op, pot, candidate);
    cp.minimizer_ = std::move(candidate);
    cp.argmin_basis_ = flat_subspace_of_argmin(op, pot);
    cp.op_ = std::move(op);
    cp.pot_ = std::move(pot);
    return cp;
}

} // namespace vanishdamp
