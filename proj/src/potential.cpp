#include "vanishdamp/potential.hpp"

#include <cmath>

namespace vanishdamp {

PotentialSpec PotentialSpec::zero() {
    PotentialSpec p;
    p.kind_ = PotentialKind::Zero;
    p.witness_ = "identically zero";
    p.flat_ = Flatness::All;
    return p;
}

PotentialSpec PotentialSpec::quartic(Vec shift, double weight) {
    if (weight < 0.0) throw Error("quartic weight must be >= 0");
    PotentialSpec p;
    p.kind_ = PotentialKind::Quartic;
    p.shift_ = std::move(shift);
    p.weight_ = weight;
    p.witness_ = "coordinate-wise (u-c)^4/4, convex for weight >= 0";
    p.flat_ = weight == 0.0 ? Flatness::All : Flatness::None;
    return p;
}

PotentialSpec PotentialSpec::log_cosh(Vec shift, double weight) {
    if (weight < 0.0) throw Error("log_cosh weight must be >= 0");
    PotentialSpec p;
    p.kind_ = PotentialKind::LogCosh;
    p.shift_ = std::move(shift);
    p.weight_ = weight;
    p.witness_ = "coordinate-wise log cosh(u-c), convex for weight >= 0";
    p.flat_ = weight == 0.0 ? Flatness::All : Flatness::None;
    return p;
}

PotentialSpec PotentialSpec::custom(std::function<double(const Vec&)> value,
                                    std::function<Vec(const Vec&)> gradient,
                                    std::string convexity_witness,
                                    std::optional<Mat> flat_subspace) {
    PotentialSpec p;
    p.kind_ = PotentialKind::Custom;
    p.fval_ = std::move(value);
    p.fgrad_ = std::move(gradient);
    p.witness_ = std::move(convexity_witness);
    if (flat_subspace) {
        p.flat_ = flat_subspace->cols() > 0 ? Flatness::Subspace : Flatness::None;
        p.flat_basis_ = std::move(*flat_subspace);
    } else {
        p.flat_ = Flatness::None;
    }
    return p;
}

namespace {
// log cosh without overflow for large |x|
inline double logcosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}
} // namespace

double PotentialSpec::value(const Vec& u) const {
    switch (kind_) {
        case PotentialKind::Zero:
            return 0.0;
        case PotentialKind::Quartic: {
            double s = 0.0;
            for (int i = 0; i < u.size(); ++i) {
                const double d = u[i] - shift_[i];
                const double d2 = d * d;
                s += d2 * d2;
            }
            return 0.25 * weight_ * s;
        }
        case PotentialKind::LogCosh: {
            double s = 0.0;
            for (int i = 0; i < u.size(); ++i) s += logcosh(u[i] - shift_[i]);
            return weight_ * s;
        }
        case PotentialKind::Custom:
            return fval_(u);
    }
    return 0.0;
}

void PotentialSpec::add_gradient(const Vec& u, Vec& g) const {
    switch (kind_) {
        case PotentialKind::Zero:
            return;
        case PotentialKind::Quartic:
            for (int i = 0; i < u.size(); ++i) {
                const double d = u[i] - shift_[i];
                g[i] += weight_ * d * d * d;
            }
            return;
        case PotentialKind::LogCosh:
            for (int i = 0; i < u.size(); ++i) g[i] += weight_ * std::tanh(u[i] - shift_[i]);
            return;
        case PotentialKind::Custom:
            g += fgrad_(u);
            return;
    }
}

Vec PotentialSpec::gradient(const Vec& u) const {
    Vec g = Vec::Zero(u.size());
    add_gradient(u, g);
    return g;
}

double PotentialSpec::lipschitz_bound(double radius) const {
    switch (kind_) {
        case PotentialKind::Zero:
            return 0.0;
        case PotentialKind::Quartic:
            return 3.0 * weight_ * radius * radius;
        case PotentialKind::LogCosh:
            return weight_;
        case PotentialKind::Custom:
            return std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
}

} // namespace vanishdamp
