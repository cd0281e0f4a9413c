#include "momenta/space.hpp"

#include <string>

namespace momenta {

SymplecticSpace::SymplecticSpace(Mat omega, double antisym_tol)
    : SymplecticSpace(omega, Mat::Identity(omega.rows(), omega.cols()), antisym_tol)
{
}

SymplecticSpace::SymplecticSpace(Mat omega, Mat metric, double antisym_tol)
    : omega_(std::move(omega)), metric_(std::move(metric))
{
    const Eigen::Index n = omega_.rows();
    if (n == 0 || omega_.cols() != n)
        throw InputError("symplectic form must be a nonempty square matrix");
    if (n % 2 != 0)
        throw InputError("symplectic space must have even dimension, got " + std::to_string(n));
    if ((omega_ + omega_.transpose()).cwiseAbs().maxCoeff() > antisym_tol)
        throw InputError("symplectic form is not antisymmetric");
    if (numerical_rank(omega_) != n)
        throw InputError("symplectic form is degenerate");
    if (metric_.rows() != n || metric_.cols() != n)
        throw InputError("metric has wrong shape");
    if ((metric_ - metric_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, metric_.norm()))
        throw InputError("metric is not symmetric");
    Eigen::LLT<Mat> llt(metric_);
    if (llt.info() != Eigen::Success)
        throw InputError("metric is not positive definite");
}

SymplecticSpace make_standard(int n)
{
    if (n < 1)
        throw InputError("make_standard: n must be at least 1");
    Mat omega = Mat::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = Mat::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return SymplecticSpace(omega, 0.0);
}

SymplecticSpace make_complex_model(int n)
{
    if (n < 1)
        throw InputError("make_complex_model: n must be at least 1");
    Mat omega = Mat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
    {
        omega(2 * j, 2 * j + 1) = 1.0;
        omega(2 * j + 1, 2 * j) = -1.0;
    }
    return SymplecticSpace(omega, 0.0);
}

Subspace::Subspace(Eigen::Index ambient_dim, Mat basis, double eps)
    : ambient_dim_(ambient_dim), basis_(std::move(basis))
{
    if (basis_.cols() > 0 && basis_.rows() != ambient_dim_)
        throw InputError("subspace basis has wrong number of rows");
    if (basis_.cols() == 0)
        basis_.resize(ambient_dim_, 0);
    if (basis_.cols() > ambient_dim_ || numerical_rank(basis_, eps) != basis_.cols())
        throw InputError("subspace basis is rank deficient");
}

Subspace Subspace::span(const Mat& columns, double eps)
{
    return Subspace(columns.rows(), orth(columns, eps), eps);
}

double Subspace::distance(const Subspace& other) const
{
    if (other.ambient_dim_ != ambient_dim_)
        throw InputError("subspaces live in different ambient spaces");
    return (projector() - other.projector()).norm();
}

bool Subspace::contains(const Subspace& other, double tol) const
{
    if (other.dim() == 0)
        return true;
    Mat p = projector();
    Mat q = orth(other.basis_);
    return (q - p * q).norm() <= tol;
}

}  // namespace momenta
