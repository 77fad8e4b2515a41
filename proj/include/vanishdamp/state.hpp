#ifndef VANISHDAMP_STATE_HPP
#define VANISHDAMP_STATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "vanishdamp/operator_spec.hpp"

namespace vanishdamp {

struct StateVector {
    double t = 0.0;
    Vec u;
    Vec w;  // du/dt

    bool finite() const { return std::isfinite(t) && u.allFinite() && w.allFinite(); }
};

struct EnergyRecord {
    double t = 0.0;
    double E = 0.0;         // 0.5*speed_sq + phi_gap
    double speed_sq = 0.0;  // |du/dt|^2
    double gamma_t = 0.0;
    double phi_gap = 0.0;   // phi(u) - min phi
};

/// Snapshot of the per-step trapezoidal accumulators at a sample time.
/// weighted_energy[i] integrates (1+s)^r_i * E(s), weighted_speed[i]
/// integrates (1+s)^q_i * |u'(s)|^2; exponents live in the trajectory echo.
struct AccumulatorSnapshot {
    double dissipation = 0.0;  // int_0^t gamma |u'|^2
    std::vector<double> weighted_energy;
    std::vector<double> weighted_speed;
    double p = 0.0;   // 0.5*|u - anchor|^2
    double dp = 0.0;  // backward difference of p at step resolution
};

struct TrajectorySample {
    StateVector state;
    EnergyRecord energy;
    AccumulatorSnapshot acc;
    // p at t-h and t+h, for central second differences at step resolution
    double p_minus = 0.0;
    double p_plus = 0.0;
    bool p_triplet_valid = false;
};

struct TrajectoryEcho {
    std::string scheme = "damped-verlet";
    std::string problem_id;
    double h = 0.0;
    double t_end = 0.0;
    double sample_ratio = 0.0;
    std::vector<double> weighted_energy_exponents;
    std::vector<double> weighted_speed_exponents;
};

/// Samples on a geometric time grid (plus t=0 and the endpoint) with the
/// config echo of the run that produced them.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<TrajectorySample> samples, TrajectoryEcho echo)
        : samples_(std::move(samples)), echo_(std::move(echo)) {}

    const std::vector<TrajectorySample>& samples() const { return samples_; }
    const TrajectoryEcho& echo() const { return echo_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const TrajectorySample& front() const { return samples_.front(); }
    const TrajectorySample& back() const { return samples_.back(); }
    const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }

    /// Index of the sample whose time is closest to t.
    std::size_t nearest(double t) const;
    /// Index of the last sample with time <= t (0 if none).
    std::size_t at_or_before(double t) const;

    std::optional<std::size_t> energy_exponent_index(double r) const;
    std::optional<std::size_t> speed_exponent_index(double q) const;

private:
    std::vector<TrajectorySample> samples_;
    TrajectoryEcho echo_;
};

} // namespace vanishdamp

#endif
