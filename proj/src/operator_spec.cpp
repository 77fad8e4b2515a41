#include "vanishdamp/operator_spec.hpp"

#include <Eigen/Eigenvalues>

namespace vanishdamp {

OperatorSpec OperatorSpec::dense(Mat matrix, double lambda_shift) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw BadDimension("operator matrix must be square and nonempty");
    OperatorSpec op;
    op.n_ = static_cast<int>(matrix.rows());
    op.mat_ = std::move(matrix);
    for (int i = 0; i < op.n_; ++i)
        for (int j = i + 1; j < op.n_; ++j)
            if (op.mat_(i, j) != op.mat_(j, i))
                throw NotSymmetric("A(i,j) != A(j,i) at (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")");
    op.finalize(lambda_shift);
    return op;
}

OperatorSpec OperatorSpec::tridiagonal(const Vec& diag, const Vec& off, double lambda_shift) {
    const int n = static_cast<int>(diag.size());
    if (n < 1 || off.size() != n - 1)
        throw BadDimension("tridiagonal operator needs |off| == |diag|-1");
    OperatorSpec op;
    op.n_ = n;
    op.tri_ = true;
    op.diag_ = diag;
    op.off_ = off;
    op.mat_ = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        op.mat_(i, i) = diag[i];
        if (i + 1 < n) {
            op.mat_(i, i + 1) = off[i];
            op.mat_(i + 1, i) = off[i];
        }
    }
    op.finalize(lambda_shift);
    return op;
}

void OperatorSpec::finalize(double lambda_shift) {
    lambda_ = lambda_shift;
    if (lambda_ < 0.0)
        throw NotSemiCoercive("lambda shift must be >= 0");

    Eigen::SelfAdjointEigenSolver<Mat> es(mat_, Eigen::EigenvaluesOnly);
    eig_min_ = es.eigenvalues().minCoeff();
    eig_max_ = es.eigenvalues().maxCoeff();
    norm_ = std::max(std::abs(eig_min_), std::abs(eig_max_));

    const double psd_slack = 1e-10 * std::max(1.0, norm_);
    if (eig_min_ < -psd_slack)
        throw NotSemiCoercive("matrix is not positive semidefinite (eig_min = " +
                              std::to_string(eig_min_) + ")");

    mu_ = eig_min_ + lambda_;
    if (mu_ <= 0.0)
        throw NotSemiCoercive("no mu > 0 with eig_min(A + lambda I) >= mu for lambda = " +
                              std::to_string(lambda_));
}

void OperatorSpec::apply(const Vec& u, Vec& out) const {
    if (tri_) {
        const int n = n_;
        out.resize(n);
        if (n == 1) {
            out[0] = diag_[0] * u[0];
            return;
        }
        out[0] = diag_[0] * u[0] + off_[0] * u[1];
        for (int i = 1; i < n - 1; ++i)
            out[i] = off_[i - 1] * u[i - 1] + diag_[i] * u[i] + off_[i] * u[i + 1];
        out[n - 1] = off_[n - 2] * u[n - 2] + diag_[n - 1] * u[n - 1];
    } else {
        out.noalias() = mat_ * u;
    }
}

Vec OperatorSpec::apply(const Vec& u) const {
    Vec out;
    apply(u, out);
    return out;
}

double OperatorSpec::quad(const Vec& u) const {
    Vec au;
    apply(u, au);
    return u.dot(au);
}

Mat OperatorSpec::kernel_basis(double tol_scale) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(mat_);
    const double tol = tol_scale * std::max(1.0, norm_);
    int k = 0;
    for (int i = 0; i < n_; ++i)
        if (std::abs(es.eigenvalues()[i]) <= tol) ++k;
    Mat basis(n_, k);
    int col = 0;
    for (int i = 0; i < n_; ++i)
        if (std::abs(es.eigenvalues()[i]) <= tol) basis.col(col++) = es.eigenvectors().col(i);
    return basis;
}

CoercivityCertificate validate_semi_coercivity(const OperatorSpec& op) {
    const double shifted = op.smallest_eig() + op.lambda_shift();
    if (shifted <= 0.0)
        throw NotSemiCoercive("eig_min(A + lambda I) = " + std::to_string(shifted) +
                              " <= 0 for lambda = " + std::to_string(op.lambda_shift()));
    return CoercivityCertificate{op.lambda_shift(), shifted, shifted};
}

} // namespace vanishdamp
