#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vanishdamp/composite.hpp"
#include "vanishdamp/damping.hpp"
#include "vanishdamp/operator_spec.hpp"
#include "vanishdamp/potential.hpp"

using namespace vanishdamp;

namespace {

OperatorSpec dirichlet_laplacian(int n, double length, double lambda = 0.0) {
    const double dx = length / (n + 1);
    const double s = 1.0 / (dx * dx);
    return OperatorSpec::tridiagonal(Vec::Constant(n, 2.0 * s), Vec::Constant(n - 1, -s), lambda);
}

} // namespace

TEST_CASE("semi-coercivity certificate: identity operator") {
    auto op = OperatorSpec::dense(Mat::Identity(3, 3), 0.0);
    auto cert = validate_semi_coercivity(op);
    CHECK(cert.lambda == 0.0);
    CHECK(cert.mu == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("semi-coercivity certificate: zero operator carried by the shift") {
    auto op = OperatorSpec::dense(Mat::Zero(2, 2), 1.0);
    auto cert = validate_semi_coercivity(op);
    CHECK(cert.mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op.smallest_eig() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("semi-coercivity certificate: Dirichlet Laplacian n=20 closed-form spectrum") {
    // smallest eigenvalue of (2/dx^2)(1 - cos(pi/21)), dx = 1/21
    const double expected = 2.0 * 441.0 * (1.0 - std::cos(std::numbers::pi / 21.0));
    auto op = dirichlet_laplacian(20, 1.0);
    CHECK(op.smallest_eig() == doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(9.8512112694366447).epsilon(1e-14));
    auto cert = validate_semi_coercivity(op);
    CHECK(cert.mu == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("asymmetric matrices are rejected at construction") {
    Mat a = Mat::Identity(2, 2);
    a(0, 1) = 1e-13;  // any exact asymmetry counts
    CHECK_THROWS_AS(OperatorSpec::dense(a, 0.0), NotSymmetric);
}

TEST_CASE("indefinite or unshifted-PSD matrices fail the coercivity gate") {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    CHECK_THROWS_AS(OperatorSpec::dense(a, 10.0), NotSemiCoercive);  // not PSD
    CHECK_THROWS_AS(OperatorSpec::dense(Mat::Zero(2, 2), 0.0), NotSemiCoercive);  // mu = 0
}

TEST_CASE("semi-coercivity with lambda=0 holds iff positive definite") {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.1, 4.0);
    for (int rep = 0; rep < 10; ++rep) {
        Mat q = Mat::NullaryExpr(4, 4, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
        Mat pd = q * q.transpose() + 0.1 * Mat::Identity(4, 4);
        Mat sym = pd.transpose();
        pd = 0.5 * (pd + sym);
        CHECK_NOTHROW(OperatorSpec::dense(pd, 0.0));

        // exactly singular PSD: a diagonal with one zero entry
        Mat sing = Mat::Zero(4, 4);
        for (int i = 1; i < 4; ++i) sing(i, i) = unif(rng);
        CHECK_THROWS_AS(OperatorSpec::dense(sing, 0.0), NotSemiCoercive);
        CHECK_NOTHROW(OperatorSpec::dense(sing, 0.5));  // lambda rescues PSD
    }
}

TEST_CASE("tridiagonal fast path matches the dense matvec") {
    auto op = dirichlet_laplacian(8, 1.0);
    std::mt19937 rng(3);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 5; ++rep) {
        Vec u = Vec::NullaryExpr(8, [&](Eigen::Index) { return gauss(rng); });
        Vec fast = op.apply(u);
        Vec dense = op.matrix() * u;
        CHECK((fast - dense).norm() <= 1e-12 * dense.norm());
    }
}

TEST_CASE("damping hypothesis checker") {
    auto grid = default_time_grid(0.0, 1e4, 200);

    SUBCASE("power law against itself: equality case") {
        auto s = DampingSchedule::power_law(1.0, 0.5);
        auto rep = check_damping_hypothesis(s, 1.0, 0.5, grid);
        CHECK(rep.ok);
        CHECK(rep.largest_admissible_K == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("constant 0.1 dominates K=0.1, alpha=0.3") {
        auto s = DampingSchedule::constant(0.1);
        CHECK(check_damping_hypothesis(s, 0.1, 0.3, grid).ok);
    }
    SUBCASE("alpha=0.5 decays below an alpha=0.4 bound") {
        auto s = DampingSchedule::power_law(1.0, 0.5);
        auto rep = check_damping_hypothesis(s, 1.0, 0.4, grid);
        CHECK_FALSE(rep.ok);
        // explicit probe at t=100: (101)^-0.5 < (101)^-0.4
        CHECK(s.gamma(100.0) < std::pow(101.0, -0.4));
    }
}

TEST_CASE("derivative condition checker") {
    auto grid = default_time_grid(0.0, 1e4, 200);

    SUBCASE("power law satisfies its own alpha with equality") {
        CHECK(check_derivative_condition(DampingSchedule::power_law(2.0, 0.75), 0.75, 0.0, grid));
    }
    SUBCASE("constants fail any alpha > 0") {
        CHECK_FALSE(check_derivative_condition(DampingSchedule::constant(1.0), 0.5, 0.0, grid));
    }
    SUBCASE("alpha=0.75 power law fails a 0.8 requirement") {
        CHECK_FALSE(
            check_derivative_condition(DampingSchedule::power_law(1.0, 0.75), 0.8, 0.0, grid));
    }
    SUBCASE("custom schedule without derivative") {
        auto s = DampingSchedule::custom([](double t) { return 1.0 / (1.0 + t); });
        CHECK_THROWS_AS(check_derivative_condition(s, 0.5, 0.0, grid), MissingDerivative);
    }
}

TEST_CASE("power law meets both hypotheses with pointwise equality") {
    auto s = DampingSchedule::power_law(2.5, 0.6);
    for (double t : default_time_grid(0.0, 1e6, 120)) {
        CHECK(s.gamma(t) * std::pow(1.0 + t, 0.6) == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(s.gamma_prime(t) == doctest::Approx(-0.6 * s.gamma(t) / (1.0 + t)).epsilon(1e-14));
    }
}

TEST_CASE("minimizer oracle") {
    SUBCASE("A = I, F = 0: origin, directly") {
        auto res = minimize_phi(OperatorSpec::dense(Mat::Identity(3, 3), 0.0),
                                PotentialSpec::zero(), Vec::Constant(3, 5.0));
        CHECK(res.minimizer.norm() == 0.0);
        CHECK(res.min_phi == 0.0);
    }
    SUBCASE("pure quartic shifted to 2") {
        auto op = OperatorSpec::dense(Mat::Zero(1, 1), 1.0);
        auto pot = PotentialSpec::quartic(Vec::Constant(1, 2.0), 1.0);
        auto res = minimize_phi(op, pot, Vec::Zero(1));
        // gradient tolerance 1e-9 allows |x-2| up to 1e-3 on a flat quartic
        CHECK(std::abs(res.minimizer[0] - 2.0) <= 2e-3);
        CHECK(res.min_phi <= 1e-11);
        CHECK(res.grad_norm <= 1e-9 * (1.0 + op.operator_norm()));
    }
    SUBCASE("degenerate composite: argmin is a line") {
        Mat a = Mat::Zero(2, 2);
        a(0, 0) = 1.0;
        Mat flat(2, 1);
        flat << 0.0, 1.0;
        auto pot = PotentialSpec::custom(
            [](const Vec& u) { return 0.25 * std::pow(u[0], 4); },
            [](const Vec& u) {
                Vec g = Vec::Zero(2);
                g[0] = u[0] * u[0] * u[0];
                return g;
            },
            "quartic in coordinate 1", flat);
        auto cp = CompositePotential::certify(OperatorSpec::dense(a, 1.0), pot, {}, Vec::Zero(2));
        REQUIRE(cp.argmin_basis().cols() == 1);
        CHECK(std::abs(cp.argmin_basis()(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(cp.argmin_basis()(0, 0)) <= 1e-12);
        // phi' vanishes along the basis from the minimizer
        for (double s : {-3.0, 0.7, 11.0}) {
            Vec probe = cp.minimizer() + s * cp.argmin_basis().col(0);
            CHECK(cp.grad_phi(probe).norm() <= cp.eps_crit());
            CHECK(cp.phi_gap(probe) <= 1e-12);
        }
    }
    SUBCASE("iteration budget exhaustion reports NoConvergence") {
        auto op = OperatorSpec::dense(Mat::Identity(2, 2), 0.0);
        auto pot = PotentialSpec::quartic(Vec::Constant(2, 1.0), 1.0);
        MinimizeOptions opts;
        opts.max_iterations = 2;
        CHECK_THROWS_AS(minimize_phi(op, pot, Vec::Constant(2, 50.0), opts), NoConvergence);
    }
}

TEST_CASE("composite certificate: minimizer is a critical point and a floor") {
    auto op = dirichlet_laplacian(20, 1.0);
    auto pot = PotentialSpec::quartic(Vec::Constant(20, 1.0), 1.0 / 21.0);
    auto cp = CompositePotential::certify(op, pot);
    CHECK(cp.grad_phi(cp.minimizer()).norm() <= cp.eps_crit());

    std::mt19937 rng(11);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 50; ++rep) {
        Vec x = Vec::NullaryExpr(20, [&](Eigen::Index) { return 2.0 * gauss(rng); });
        CHECK(cp.phi_gap(x) >= -cp.eps_crit());
    }
}

TEST_CASE("gradient consistency: central differences converge at second order") {
    std::mt19937 rng(19);
    std::normal_distribution<double> gauss;
    auto probe = [&](const PotentialSpec& pot, int n) {
        int order_checks = 0;
        for (int rep = 0; rep < 100; ++rep) {
            Vec x = Vec::NullaryExpr(n, [&](Eigen::Index) { return gauss(rng); });
            Vec d = Vec::NullaryExpr(n, [&](Eigen::Index) { return gauss(rng); });
            d /= d.norm();
            const double directional = pot.gradient(x).dot(d);
            auto fd = [&](double h) {
                return (pot.value(x + h * d) - pot.value(x - h * d)) / (2.0 * h);
            };
            const double e1 = std::abs(fd(1e-3) - directional);
            const double e2 = std::abs(fd(5e-4) - directional);
            CHECK(e1 <= 1e-4);
            if (e1 > 1e-9) {  // above roundoff: halving h must quarter the error
                CHECK(e2 <= e1 / 3.0);
                ++order_checks;
            }
        }
        CHECK(order_checks > 50);
    };
    probe(PotentialSpec::quartic(Vec::Constant(6, 0.3), 1.0), 6);
    probe(PotentialSpec::log_cosh(Vec::Zero(6), 0.7), 6);
}

TEST_CASE("convexity along random segments") {
    std::mt19937 rng(23);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto op = dirichlet_laplacian(8, 1.0);
    auto pot = PotentialSpec::quartic(Vec::Constant(8, 0.5), 2.0);
    auto cp = CompositePotential::certify(op, pot);
    for (int rep = 0; rep < 200; ++rep) {
        Vec x = Vec::NullaryExpr(8, [&](Eigen::Index) { return 3.0 * gauss(rng); });
        Vec y = Vec::NullaryExpr(8, [&](Eigen::Index) { return 3.0 * gauss(rng); });
        const double th = unif(rng);
        const double lhs = cp.phi(th * x + (1.0 - th) * y);
        const double rhs = th * cp.phi(x) + (1.0 - th) * cp.phi(y);
        const double scale = std::abs(cp.phi(x)) + std::abs(cp.phi(y)) + 1.0;
        CHECK(lhs <= rhs + 1e-12 * scale);
    }
}

TEST_CASE("custom potentials get midpoint-convexity spot checks") {
    auto pot = PotentialSpec::custom(
        [](const Vec& u) { return std::abs(u[0]) + 0.5 * u[0] * u[0]; },
        [](const Vec& u) {
            Vec g(1);
            g[0] = (u[0] > 0 ? 1.0 : -1.0) + u[0];
            return g;
        },
        "|x| + x^2/2");
    std::mt19937 rng(31);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 100; ++rep) {
        Vec x = Vec::Constant(1, gauss(rng)), y = Vec::Constant(1, gauss(rng));
        CHECK(pot.value(0.5 * (x + y)) <= 0.5 * (pot.value(x) + pot.value(y)) + 1e-12);
    }
}
