#ifndef VANISHDAMP_PROBLEMS_HPP
#define VANISHDAMP_PROBLEMS_HPP

#include <vector>

#include "vanishdamp/composite.hpp"
#include "vanishdamp/state.hpp"

namespace vanishdamp {

/// Certified test problem: operator + potential + initial data + minimizer
/// data, with regime tags and the gradient-Lipschitz bound that feeds the
/// step-size guard.
struct ProblemSpec {
    std::string id;
    CompositePotential certified;
    StateVector init;
    std::vector<std::string> notes;  // regime tags
    double lipschitz_f = 0.0;

    const OperatorSpec& op() const { return certified.op(); }
    const PotentialSpec& pot() const { return certified.pot(); }
    int n() const { return certified.op().n(); }
    bool has_note(const std::string& tag) const {
        for (const auto& s : notes)
            if (s == tag) return true;
        return false;
    }
};

enum class NodePotential { Zero, Quartic, LogCosh };

/// 1D Dirichlet wave semi-discretization on (0, L) with n interior nodes:
/// A = (1/dx^2) tridiag(-1, 2, -1), dx = L/(n+1), nodal potential scaled by
/// dx. shift is applied per node; node_weight multiplies the dx scaling.
ProblemSpec build_wave_problem(int n, double length, NodePotential kind, double shift = 0.0,
                               double node_weight = 1.0);

/// The built-in certified problems:
///   scalar-harmonic     n=1, A=[1], F=0
///   dirichlet-wave-20   n=20 Dirichlet Laplacian, F=0, nonzero w(0)
///   semilinear-wave-20  same A plus nodal quartic shifted by 1
///   degenerate-flat     A=diag(1,0), quartic in coordinate 1; argmin is a line
///   far-start           semilinear-wave-20 started at ||u(0)|| = 100
std::vector<ProblemSpec> catalog();

/// Catalog lookup by id; throws Error on unknown ids.
ProblemSpec catalog_problem(const std::string& id);

} // namespace vanishdamp

#endif
