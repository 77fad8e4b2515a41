#ifndef VANISHDAMP_COMPOSITE_HPP
#define VANISHDAMP_COMPOSITE_HPP

#include <optional>

#include "vanishdamp/operator_spec.hpp"
#include "vanishdamp/potential.hpp"

namespace vanishdamp {

struct MinimizeOptions {
    /// Stopping rule: ||grad phi|| <= eps_crit_scale * (1 + ||A||).
    double eps_crit_scale = 1e-9;
    long max_iterations = 200000;
    /// Initial curvature estimate; <= 0 means use ||A|| + a potential bound.
    double lipschitz_hint = -1.0;
};

struct MinimizeResult {
    Vec minimizer;
    double min_phi;
    long iterations;
    double grad_norm;
};

/// Minimizer oracle for phi(v) = 0.5<Av,v> + F(v): accelerated first-order
/// descent (monotone FISTA with function-value restart and backtracking)
/// stopped on the gradient norm. Zero potential with PSD A short-circuits to
/// the direct solution u = 0. Throws NoConvergence past the iteration budget.
MinimizeResult minimize_phi(const OperatorSpec& op, const PotentialSpec& pot, const Vec& start,
                            const MinimizeOptions& opts = {});

/// phi = 0.5*a(v,v) + F(v) together with its certified minimizer data:
/// min phi, a point of argmin phi, and an orthonormal basis of the flat
/// subspace of argmin phi at that point (kernel of A intersected with the
/// declared flat directions of F).
class CompositePotential {
public:
    static CompositePotential certify(OperatorSpec op, PotentialSpec pot,
                                      const MinimizeOptions& opts = {},
                                      std::optional<Vec> analytic_minimizer = std::nullopt);

    const OperatorSpec& op() const { return op_; }
    const PotentialSpec& pot() const { return pot_; }
    const Vec& minimizer() const { return minimizer_; }
    double min_phi() const { return min_phi_; }
    const Mat& argmin_basis() const { return argmin_basis_; }
    double eps_crit() const { return eps_crit_; }

    double phi(const Vec& u) const { return 0.5 * op_.quad(u) + pot_.value(u); }
    double phi_gap(const Vec& u) const { return phi(u) - min_phi_; }

    /// out = A u + f(u)
    void grad_phi(const Vec& u, Vec& out) const {
        op_.apply(u, out);
        pot_.add_gradient(u, out);
    }
    Vec grad_phi(const Vec& u) const {
        Vec g;
        grad_phi(u, g);
        return g;
    }

private:
    OperatorSpec op_;
    PotentialSpec pot_;
    Vec minimizer_;
    double min_phi_ = 0.0;
    Mat argmin_basis_;
    double eps_crit_ = 0.0;
};

} // namespace vanishdamp

#endif
