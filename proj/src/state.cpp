#include "vanishdamp/state.hpp"

#include <cmath>

namespace vanishdamp {

std::size_t Trajectory::nearest(double t) const {
    std::size_t best = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double d = std::abs(samples_[i].state.t - t);
        if (d < gap) {
            gap = d;
            best = i;
        }
    }
    return best;
}

std::size_t Trajectory::at_or_before(double t) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < samples_.size(); ++i)
        if (samples_[i].state.t <= t) idx = i;
    return idx;
}

namespace {
std::optional<std::size_t> find_exponent(const std::vector<double>& list, double x) {
    for (std::size_t i = 0; i < list.size(); ++i)
        if (std::abs(list[i] - x) <= 1e-12 * std::max(1.0, std::abs(x))) return i;
    return std::nullopt;
}
} // namespace

std::optional<std::size_t> Trajectory::energy_exponent_index(double r) const {
    return find_exponent(echo_.weighted_energy_exponents, r);
}

std::optional<std::size_t> Trajectory::speed_exponent_index(double q) const {
    return find_exponent(echo_.weighted_speed_exponents, q);
}

} // namespace vanishdamp
