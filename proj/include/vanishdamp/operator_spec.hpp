#ifndef VANISHDAMP_OPERATOR_SPEC_HPP
#define VANISHDAMP_OPERATOR_SPEC_HPP

#include <Eigen/Dense>

#include "vanishdamp/errors.hpp"

namespace vanishdamp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Certificate that eig_min(A + lambda*I) >= mu with mu > 0.
struct CoercivityCertificate {
    double lambda;
    double mu;
    double smallest_eig_shifted;
};

/// Symmetric positive-semidefinite linear operator with cached spectral
/// metadata and an optional tridiagonal fast path for wave discretizations.
///
/// Invariants enforced at construction:
///  - the matrix is exactly symmetric (factories reject anything else),
///  - smallest eigenvalue >= -1e-10 * ||A|| (numerical PSD slack),
///  - eig_min(A + lambda*I) >= mu > 0 for the stored shift.
class OperatorSpec {
public:
    /// Empty operator; every usable instance comes from a factory below.
    OperatorSpec() = default;

    static OperatorSpec dense(Mat matrix, double lambda_shift = 0.0);

    /// (1/scale) * tridiag(off, diag, off); keeps the banded structure for
    /// the matvec while still exposing a dense mirror for spectral queries.
    static OperatorSpec tridiagonal(const Vec& diag, const Vec& off, double lambda_shift = 0.0);

    int n() const { return n_; }
    double lambda_shift() const { return lambda_; }
    double mu() const { return mu_; }
    double smallest_eig() const { return eig_min_; }
    double largest_eig() const { return eig_max_; }
    /// Spectral norm (largest |eigenvalue|).
    double operator_norm() const { return norm_; }
    bool is_tridiagonal() const { return tri_; }
    const Mat& matrix() const { return mat_; }

    /// out = A*u
    void apply(const Vec& u, Vec& out) const;
    Vec apply(const Vec& u) const;

    /// <Au, u>
    double quad(const Vec& u) const;

    /// Orthonormal basis of the numerical kernel (eigenvalues below
    /// tol_scale * max(1, ||A||)); columns of the result span ker A.
    Mat kernel_basis(double tol_scale = 1e-9) const;

private:
    void finalize(double lambda_shift);

    Mat mat_;
    Vec diag_, off_;   // tridiagonal storage when tri_
    bool tri_ = false;
    int n_ = 0;
    double lambda_ = 0.0;
    double mu_ = 0.0;
    double eig_min_ = 0.0;
    double eig_max_ = 0.0;
    double norm_ = 0.0;
};

/// Returns the largest mu with eig_min(A + lambda*I) >= mu for the stored
/// lambda. Throws NotSemiCoercive when no positive mu exists.
CoercivityCertificate validate_semi_coercivity(const OperatorSpec& op);

} // namespace vanishdamp

#endif
