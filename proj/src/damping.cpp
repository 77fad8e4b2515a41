#include "vanishdamp/damping.hpp"

#include <cmath>
#include <vector>

namespace vanishdamp {

DampingSchedule DampingSchedule::power_law(double K, double alpha, double t0) {
    if (K <= 0.0) throw Error("power-law damping requires K > 0");
    if (alpha < 0.0 || alpha >= 1.0) throw Error("power-law damping requires alpha in [0,1)");
    if (t0 < 0.0) throw Error("t0 must be >= 0");
    DampingSchedule s;
    s.kind_ = DampingKind::PowerLaw;
    s.K_ = K;
    s.alpha_ = alpha;
    s.t0_ = t0;
    return s;
}

DampingSchedule DampingSchedule::constant(double c, double t0) {
    if (c < 0.0) throw Error("constant damping requires c >= 0");
    if (t0 < 0.0) throw Error("t0 must be >= 0");
    DampingSchedule s;
    s.kind_ = DampingKind::Constant;
    s.K_ = c;
    s.t0_ = t0;
    return s;
}

DampingSchedule DampingSchedule::custom(std::function<double(double)> gamma,
                                        std::function<double(double)> gamma_prime, double t0) {
    if (!gamma) throw Error("custom damping requires a gamma callable");
    DampingSchedule s;
    s.kind_ = DampingKind::Custom;
    s.gamma_ = std::move(gamma);
    s.dgamma_ = std::move(gamma_prime);
    s.t0_ = t0;
    return s;
}

double DampingSchedule::gamma(double t) const {
    switch (kind_) {
        case DampingKind::PowerLaw:
            return alpha_ == 0.0 ? K_ : K_ * std::pow(1.0 + t, -alpha_);
        case DampingKind::Constant:
            return K_;
        case DampingKind::Custom:
            return gamma_(t);
    }
    return 0.0;
}

double DampingSchedule::gamma_prime(double t) const {
    switch (kind_) {
        case DampingKind::PowerLaw:
            return -alpha_ * gamma(t) / (1.0 + t);
        case DampingKind::Constant:
            return 0.0;
        case DampingKind::Custom:
            if (!dgamma_) throw MissingDerivative("custom schedule has no gamma'");
            return dgamma_(t);
    }
    return 0.0;
}

std::string DampingSchedule::describe() const {
    switch (kind_) {
        case DampingKind::PowerLaw:
            return "powerlaw(K=" + std::to_string(K_) + ", alpha=" + std::to_string(alpha_) + ")";
        case DampingKind::Constant:
            return "constant(" + std::to_string(K_) + ")";
        case DampingKind::Custom:
            return "custom";
    }
    return "";
}

HypothesisReport check_damping_hypothesis(const DampingSchedule& sched, double K, double alpha,
                                          std::span<const double> grid) {
    if (grid.empty()) throw Error("hypothesis check needs a nonempty grid");
    double largest = std::numeric_limits<double>::infinity();
    bool ok = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : grid) {
        if (t < prev) throw Error("hypothesis grid must be increasing");
        prev = t;
        const double g = sched.gamma(t);
        const double bound = K * std::pow(1.0 + t, -alpha);
        largest = std::min(largest, g * std::pow(1.0 + t, alpha));
        if (g < bound * (1.0 - 1e-12)) ok = false;
    }
    return HypothesisReport{ok, largest};
}

bool check_derivative_condition(const DampingSchedule& sched, double alpha, double t0,
                                std::span<const double> grid) {
    for (double t : grid) {
        if (t < t0) continue;
        const double g = sched.gamma(t);
        const double dg = sched.gamma_prime(t);  // throws MissingDerivative
        const double rhs = -alpha * g / (1.0 + t);
        if (dg > rhs + 1e-12 * (std::abs(rhs) + std::abs(dg))) return false;
    }
    return true;
}

std::vector<double> default_time_grid(double a, double b, int points) {
    std::vector<double> grid;
    grid.reserve(points);
    // log-spaced in (1+t) so the tail gets probed as densely as the onset
    const double la = std::log1p(a), lb = std::log1p(b);
    for (int i = 0; i < points; ++i) {
        const double s = la + (lb - la) * i / double(points - 1);
        grid.push_back(std::expm1(s));
    }
    return grid;
}

} // namespace vanishdamp
