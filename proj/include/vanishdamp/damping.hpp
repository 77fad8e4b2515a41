#ifndef VANISHDAMP_DAMPING_HPP
#define VANISHDAMP_DAMPING_HPP

#include <functional>
#include <span>
#include <string>

#include "vanishdamp/errors.hpp"

namespace vanishdamp {

enum class DampingKind { PowerLaw, Constant, Custom };

/// Nonincreasing damping coefficient gamma(t) >= 0.
///
/// PowerLaw is gamma(t) = K/(1+t)^alpha with alpha in [0,1); it satisfies
/// both the lower-bound hypothesis and the derivative condition with
/// equality at every t. Constant admits c = 0 so the undamped control probe
/// can run through the same machinery (the hypothesis checkers then fail,
/// which is the point of the control).
class DampingSchedule {
public:
    static DampingSchedule power_law(double K, double alpha, double t0 = 0.0);
    static DampingSchedule constant(double c, double t0 = 0.0);
    static DampingSchedule custom(std::function<double(double)> gamma,
                                  std::function<double(double)> gamma_prime = nullptr,
                                  double t0 = 0.0);

    DampingKind kind() const { return kind_; }
    double K() const { return K_; }
    double alpha() const { return alpha_; }
    double t0() const { return t0_; }
    bool has_derivative() const { return kind_ != DampingKind::Custom || bool(dgamma_); }

    double gamma(double t) const;
    /// Throws MissingDerivative for Custom schedules without gamma'.
    double gamma_prime(double t) const;

    std::string describe() const;

private:
    DampingKind kind_ = DampingKind::Constant;
    double K_ = 0.0;      // PowerLaw K, or the Constant value
    double alpha_ = 0.0;  // PowerLaw exponent
    double t0_ = 0.0;
    std::function<double(double)> gamma_;
    std::function<double(double)> dgamma_;
};

struct HypothesisReport {
    bool ok;
    /// min over the grid of gamma(t)*(1+t)^alpha.
    double largest_admissible_K;
};

/// True iff gamma(t) >= K/(1+t)^alpha at every grid point (with 1e-12
/// relative slack so the power-law equality case is robust in floats).
HypothesisReport check_damping_hypothesis(const DampingSchedule& sched, double K, double alpha,
                                          std::span<const double> grid);

/// True iff gamma'(t) <= -alpha*gamma(t)/(1+t) at all grid points >= t0.
bool check_derivative_condition(const DampingSchedule& sched, double alpha, double t0,
                                std::span<const double> grid);

/// Geometric probe grid on [a, b], endpoints included.
std::vector<double> default_time_grid(double a = 0.0, double b = 1e4, int points = 200);

} // namespace vanishdamp

#endif
