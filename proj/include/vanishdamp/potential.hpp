#ifndef VANISHDAMP_POTENTIAL_HPP
#define VANISHDAMP_POTENTIAL_HPP

#include <functional>
#include <optional>
#include <string>

#include "vanishdamp/operator_spec.hpp"

namespace vanishdamp {

enum class PotentialKind { Zero, Quartic, LogCosh, Custom };

/// Convex C1 potential F with gradient f. Built-in kinds are convex by
/// construction and separate per coordinate; Custom carries user callables
/// plus an optional analytic description of its flat directions.
class PotentialSpec {
public:
    /// Directions along which F is constant: everywhere (Zero / weight 0),
    /// nowhere, or a declared subspace (columns of flat_subspace()).
    enum class Flatness { All, None, Subspace };

    static PotentialSpec zero();
    /// F(u) = (w/4) * sum_i (u_i - c_i)^4
    static PotentialSpec quartic(Vec shift, double weight);
    /// F(u) = w * sum_i log cosh(u_i - c_i)
    static PotentialSpec log_cosh(Vec shift, double weight);
    static PotentialSpec custom(std::function<double(const Vec&)> value,
                                std::function<Vec(const Vec&)> gradient,
                                std::string convexity_witness,
                                std::optional<Mat> flat_subspace = std::nullopt);

    PotentialKind kind() const { return kind_; }
    const std::string& convexity_witness() const { return witness_; }
    double weight() const { return weight_; }
    const Vec& shift() const { return shift_; }

    double value(const Vec& u) const;
    Vec gradient(const Vec& u) const;
    /// g += f(u); avoids a temporary inside the integrator hot loop.
    void add_gradient(const Vec& u, Vec& g) const;

    Flatness flatness() const { return flat_; }
    const Mat& flat_subspace() const { return flat_basis_; }

    /// Gradient-Lipschitz bound valid on the ball ||u - shift||_inf <= radius.
    /// Quartic grows with the radius; the others are global.
    double lipschitz_bound(double radius) const;

private:
    PotentialKind kind_ = PotentialKind::Zero;
    std::string witness_;
    Vec shift_;
    double weight_ = 0.0;
    std::function<double(const Vec&)> fval_;
    std::function<Vec(const Vec&)> fgrad_;
    Flatness flat_ = Flatness::All;
    Mat flat_basis_;
};

} // namespace vanishdamp

#endif
