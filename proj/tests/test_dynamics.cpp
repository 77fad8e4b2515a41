#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vanishdamp/csvio.hpp"
#include "vanishdamp/integrate.hpp"
#include "vanishdamp/problems.hpp"
#include "vanishdamp/reference.hpp"

using namespace vanishdamp;

namespace {

// frozen with an independent adaptive integration (tol 1e-13) of
// u'' + (1+t)^{-1/2} u' + u = 0, u(0)=1, u'(0)=0
constexpr double kDampedScalarU10 = -0.10976874277350593;
constexpr double kDampedScalarW10 = 0.014667496281280916;

CompositePotential free_particle_1d() {
    return CompositePotential::certify(OperatorSpec::dense(Mat::Zero(1, 1), 1.0),
                                       PotentialSpec::zero());
}

} // namespace

TEST_CASE("step: free motion is exact") {
    auto cp = free_particle_1d();
    auto sched = DampingSchedule::constant(0.0);
    StateVector s{0.0, Vec::Zero(1), Vec::Constant(1, 1.0)};
    StateVector out = step(s, 0.1, cp, sched);
    CHECK(out.t == doctest::Approx(0.1));
    CHECK(out.u[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(out.w[0] == 1.0);
}

TEST_CASE("step: undamped oscillator conserves energy over [0,100]") {
    auto p = catalog_problem("scalar-harmonic");
    auto sched = DampingSchedule::constant(0.0);
    IntegrateOptions o;
    o.h = 0.01;
    o.t_end = 100.0;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    const double e0 = traj.front().energy.E;
    for (const auto& s : traj.samples()) CHECK(std::abs(s.energy.E - e0) <= 1e-4);
}

TEST_CASE("step: damped scalar endpoint matches the adaptive reference") {
    auto p = catalog_problem("scalar-harmonic");
    auto sched = DampingSchedule::power_law(1.0, 0.5);

    // the reference integrator itself reproduces the frozen oracle value
    StateVector ref = reference_integrate(p.certified, sched, p.init, 10.0);
    CHECK(std::abs(ref.u[0] - kDampedScalarU10) <= 1e-9);
    CHECK(std::abs(ref.w[0] - kDampedScalarW10) <= 1e-9);

    IntegrateOptions o;
    o.h = 1e-3;
    o.t_end = 10.0;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    CHECK(std::abs(traj.back().state.u[0] - kDampedScalarU10) <= 1e-4);
}

TEST_CASE("reference integrator against the critically-damped closed form") {
    // u'' + 2u' + u = 0, u(0)=1, w(0)=0 has u = (1+t) e^{-t}
    auto p = catalog_problem("scalar-harmonic");
    auto sched = DampingSchedule::constant(2.0);
    StateVector ref = reference_integrate(p.certified, sched, p.init, 10.0);
    const double exact_u = 11.0 * std::exp(-10.0);
    const double exact_w = -10.0 * std::exp(-10.0);
    CHECK(std::abs(ref.u[0] - exact_u) <= 1e-10);
    CHECK(std::abs(ref.w[0] - exact_w) <= 1e-10);
}

TEST_CASE("integrate: stationary start stays stationary with zero accumulators") {
    auto cp = free_particle_1d();
    auto sched = DampingSchedule::power_law(1.0, 0.25);
    IntegrateOptions o;
    o.h = 1e-2;
    o.t_end = 50.0;
    o.weighted_energy_exponents = {0.0, -0.25};
    o.weighted_speed_exponents = {0.25};
    StateVector init{0.0, Vec::Constant(1, 3.0), Vec::Zero(1)};
    auto traj = integrate(cp, sched, init, o, "stationary");
    for (const auto& s : traj.samples()) {
        CHECK(s.energy.E == 0.0);
        CHECK(s.acc.dissipation == 0.0);
        for (double v : s.acc.weighted_energy) CHECK(v == 0.0);
        for (double v : s.acc.weighted_speed) CHECK(v == 0.0);
    }
    CHECK(dissipation_residual(traj) == 0.0);
}

TEST_CASE("integrate: constant damping gamma=2 reaches the closed-form energy") {
    auto p = catalog_problem("scalar-harmonic");
    auto sched = DampingSchedule::constant(2.0);
    IntegrateOptions o;
    o.h = 1e-3;
    o.t_end = 10.0;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    const double E10 = traj.back().energy.E;
    // E(t) = e^{-2t} (t^2 + (1+t)^2)/2 at t=10
    const double exact = 0.5 * std::exp(-20.0) * 221.0;
    CHECK(exact == doctest::Approx(2.2775747527946065e-07).epsilon(1e-14));
    CHECK(E10 <= 1e-6);
    CHECK(E10 == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("dissipation accumulator equals the energy drop (wave problem)") {
    auto p = catalog_problem("dirichlet-wave-20");
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    IntegrateOptions o;
    o.h = 2e-4;
    o.t_end = 100.0;
    o.lipschitz_f = p.lipschitz_f;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    const double drop = traj.front().energy.E - traj.back().energy.E;
    const double diss = traj.back().acc.dissipation;
    CHECK(std::abs(diss - drop) <= 1e-6 * drop);
}

TEST_CASE("dissipation residual decays at second order in h") {
    auto p = catalog_problem("dirichlet-wave-20");
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    auto residual_at = [&](double h) {
        IntegrateOptions o;
        o.h = h;
        o.t_end = 100.0;
        o.lipschitz_f = p.lipschitz_f;
        return dissipation_residual(integrate(p.certified, sched, p.init, o, p.id));
    };
    const double r1 = residual_at(1e-3);
    const double r2 = residual_at(5e-4);
    CHECK(r2 <= r1 / 3.0);
}

TEST_CASE("tail identity holds at quadrature tolerance along the samples") {
    auto p = catalog_problem("semilinear-wave-20");
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    IntegrateOptions o;
    o.h = 1e-3;
    o.t_end = 200.0;
    o.lipschitz_f = p.lipschitz_f;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    const double eN = traj.back().energy.E;
    const double dN = traj.back().acc.dissipation;
    const double res = dissipation_residual(traj);
    for (const auto& s : traj.samples()) {
        const double lhs = s.energy.E - eN;
        const double rhs = dN - s.acc.dissipation;
        CHECK(std::abs(lhs - rhs) <= 2.0 * res + 1e-12);
    }
}

TEST_CASE("energy record") {
    auto sched = DampingSchedule::constant(1.0);
    SUBCASE("zero at the minimizer") {
        auto p = catalog_problem("semilinear-wave-20");
        StateVector s{0.0, p.certified.minimizer(), Vec::Zero(20)};
        auto rec = energy(s, p.certified, sched);
        CHECK(std::abs(rec.E) <= p.certified.eps_crit());
    }
    SUBCASE("scalar: kinetic plus potential") {
        auto cp = CompositePotential::certify(OperatorSpec::dense(Mat::Identity(1, 1), 0.0),
                                              PotentialSpec::zero());
        StateVector s{0.0, Vec::Constant(1, 1.0), Vec::Constant(1, 1.0)};
        auto rec = energy(s, cp, sched);
        CHECK(rec.E == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("quartic two-dof example") {
        auto cp = CompositePotential::certify(OperatorSpec::dense(Mat::Identity(2, 2), 0.0),
                                              PotentialSpec::quartic(Vec::Zero(2), 1.0));
        Vec u(2), w(2);
        u << 1.0, 0.0;
        w << 0.0, 2.0;
        auto rec = energy(StateVector{0.0, u, w}, cp, sched);
        // 2 (kinetic) + 1/2 (quadratic) + 1/4 (quartic)
        CHECK(rec.E == doctest::Approx(2.75).epsilon(1e-14));
        CHECK(rec.E ==
              doctest::Approx(0.5 * rec.speed_sq + rec.phi_gap).epsilon(1e-12));
    }
}

TEST_CASE("discrete energy monotone and accumulators nondecreasing") {
    auto p = catalog_problem("semilinear-wave-20");
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    IntegrateOptions o;
    o.h = 5e-3;
    o.t_end = 1e3;
    o.weighted_energy_exponents = {-0.5, 0.0};
    o.weighted_speed_exponents = {0.5, 0.0};
    o.lipschitz_f = p.lipschitz_f;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    const double e0 = traj.front().energy.E;
    const double tol_rate = 10.0 * o.h * o.h * (1.0 + e0) * (p.op().operator_norm() + p.lipschitz_f);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double dt = traj[i].state.t - traj[i - 1].state.t;
        CHECK(traj[i].energy.E <= traj[i - 1].energy.E + tol_rate * dt);
        CHECK(traj[i].acc.dissipation >= traj[i - 1].acc.dissipation);
        for (std::size_t k = 0; k < traj[i].acc.weighted_energy.size(); ++k)
            CHECK(traj[i].acc.weighted_energy[k] >= traj[i - 1].acc.weighted_energy[k]);
        for (std::size_t k = 0; k < traj[i].acc.weighted_speed.size(); ++k)
            CHECK(traj[i].acc.weighted_speed[k] >= traj[i - 1].acc.weighted_speed[k]);
    }
}

TEST_CASE("identical config produces a bit-identical trajectory") {
    auto p = catalog_problem("degenerate-flat");
    auto sched = DampingSchedule::power_law(1.0, 0.75);
    IntegrateOptions o;
    o.h = 1e-3;
    o.t_end = 100.0;
    o.weighted_energy_exponents = {-0.75, 0.0};
    o.weighted_speed_exponents = {0.75};
    o.lipschitz_f = p.lipschitz_f;
    auto a = integrate(p.certified, sched, p.init, o, p.id);
    auto b = integrate(p.certified, sched, p.init, o, p.id);
    CHECK(trajectory_csv(a) == trajectory_csv(b));
}

TEST_CASE("sampling grid: strictly increasing, geometric, endpoint included") {
    auto p = catalog_problem("scalar-harmonic");
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    IntegrateOptions o;
    o.h = 1e-3;
    o.t_end = 1e3;
    o.sample_ratio = 1.1;
    auto traj = integrate(p.certified, sched, p.init, o, p.id);
    REQUIRE(traj.size() >= 20);
    CHECK(traj.front().state.t == 0.0);
    CHECK(traj.back().state.t == doctest::Approx(1e3).epsilon(1e-9));
    for (std::size_t i = 1; i < traj.size(); ++i) {
        CHECK(traj[i].state.t > traj[i - 1].state.t);
        if (traj[i - 1].state.t >= 1.0 && i + 1 < traj.size()) {
            const double ratio = traj[i].state.t / traj[i - 1].state.t;
            CHECK(ratio <= 1.1 + 0.01);  // geometric up to step rounding
        }
    }
    // p triplets exist away from the ends and support second differences
    int valid = 0;
    for (const auto& s : traj.samples())
        if (s.p_triplet_valid) {
            CHECK(std::isfinite((s.p_plus - 2 * s.acc.p + s.p_minus) / (o.h * o.h)));
            ++valid;
        }
    CHECK(valid >= static_cast<int>(traj.size()) - 1);
}

TEST_CASE("oracle equivalence on every catalog problem") {
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    for (const auto& p : catalog()) {
        CAPTURE(p.id);
        const double t_end = 50.0;
        StateVector ref = reference_integrate(p.certified, sched, p.init, t_end);
        IntegrateOptions o;
        o.h = 1e-3;
        o.t_end = t_end;
        o.lipschitz_f = p.lipschitz_f;
        auto traj = integrate(p.certified, sched, p.init, o, p.id);
        const double err = (traj.back().state.u - ref.u).norm();
        // absolute for unit-scale starts, relative for the far start
        CHECK(err <= 1e-4 * std::max(1.0, p.init.u.norm()));
    }
}

TEST_CASE("guard rails") {
    auto p = catalog_problem("dirichlet-wave-20");
    auto sched = DampingSchedule::power_law(1.0, 0.5);
    SUBCASE("h beyond the stability bound is rejected") {
        IntegrateOptions o;
        o.h = 1.0;
        o.t_end = 10.0;
        CHECK(max_stable_step(p.op(), 0.0) < 0.02);
        CHECK_THROWS_AS(integrate(p.certified, sched, p.init, o, p.id), StepTooLarge);
    }
    SUBCASE("integration blow-up surfaces as NonFinite") {
        // stiff quartic with an understated Lipschitz bound sneaks past the
        // h_max guard and must be caught by the finiteness check
        auto cp = CompositePotential::certify(OperatorSpec::dense(Mat::Zero(1, 1), 1.0),
                                              PotentialSpec::quartic(Vec::Zero(1), 1.0));
        IntegrateOptions o;
        o.h = 0.4;
        o.t_end = 100.0;
        o.lipschitz_f = 0.0;
        StateVector init{0.0, Vec::Constant(1, 10.0), Vec::Zero(1)};
        CHECK_THROWS_AS(integrate(cp, DampingSchedule::constant(0.0), init, o, "blowup"),
                        NonFinite);
    }
    SUBCASE("weighted-energy exponent -1 is rejected") {
        IntegrateOptions o;
        o.h = 1e-3;
        o.t_end = 10.0;
        o.weighted_energy_exponents = {-1.0};
        o.lipschitz_f = p.lipschitz_f;
        CHECK_THROWS_AS(integrate(p.certified, sched, p.init, o, p.id), BadExponent);
    }
}
