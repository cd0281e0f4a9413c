#include "momenta/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momenta {

double rank_threshold(const Vec& singular_values, Eigen::Index rows, Eigen::Index cols, double eps)
{
    if (singular_values.size() == 0)
        return 0.0;
    double smax = singular_values.maxCoeff();
    return static_cast<double>(std::max(rows, cols)) * eps * smax;
}

Eigen::Index numerical_rank(const Mat& a, double eps)
{
    if (a.rows() == 0 || a.cols() == 0)
        return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    const Vec& s = svd.singularValues();
    if (s.maxCoeff() == 0.0)
        return 0;
    double thr = rank_threshold(s, a.rows(), a.cols(), eps);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr)
            ++r;
    return r;
}

Mat orth(const Mat& a, double eps)
{
    if (a.cols() == 0 || a.rows() == 0)
        return Mat(a.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
    const Vec& s = svd.singularValues();
    if (s.maxCoeff() == 0.0)
        return Mat(a.rows(), 0);
    double thr = rank_threshold(s, a.rows(), a.cols(), eps);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > thr)
        ++r;
    return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, Eigen::Index cols, double eps)
{
    if (cols == 0)
        return Mat(0, 0);
    if (a.rows() == 0)
        return Mat::Identity(cols, cols);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    Eigen::Index r = 0;
    if (s.size() > 0 && s.maxCoeff() > 0.0)
    {
        double thr = rank_threshold(s, a.rows(), a.cols(), eps);
        while (r < s.size() && s(r) > thr)
            ++r;
    }
    return svd.matrixV().rightCols(cols - r);
}

Mat projector(const Mat& basis, Eigen::Index n, double eps)
{
    if (basis.cols() == 0)
        return Mat::Zero(n, n);
    Mat q = orth(basis, eps);
    return q * q.transpose();
}

double projector_distance(const Mat& a, const Mat& b)
{
    if (a.rows() != b.rows() && a.cols() > 0 && b.cols() > 0)
        throw InputError("projector_distance: ambient dimensions differ");
    Eigen::Index n = std::max(a.rows(), b.rows());
    return (projector(a, n) - projector(b, n)).norm();
}

Mat span_sum(const Mat& a, const Mat& b, double eps)
{
    Eigen::Index n = std::max(a.rows(), b.rows());
    Mat both(n, a.cols() + b.cols());
    if (a.cols() > 0)
        both.leftCols(a.cols()) = a;
    if (b.cols() > 0)
        both.rightCols(b.cols()) = b;
    return orth(both, eps);
}

Mat span_intersection(const Mat& a, const Mat& b, double eps)
{
    Eigen::Index n = std::max(a.rows(), b.rows());
    if (a.cols() == 0 || b.cols() == 0)
        return Mat(n, 0);
    Mat qa = orth(a, eps);
    Mat qb = orth(b, eps);
    if (qa.cols() == 0 || qb.cols() == 0)
        return Mat(n, 0);
    Mat stacked(n, qa.cols() + qb.cols());
    stacked << qa, -qb;
    Mat coeffs = null_space(stacked, eps);
    if (coeffs.cols() == 0)
        return Mat(n, 0);
    return orth(qa * coeffs.topRows(qa.cols()), eps);
}

Mat metric_complement(const Mat& basis, const Mat& metric, double eps)
{
    Eigen::Index n = metric.rows();
    if (basis.cols() == 0)
        return Mat::Identity(n, n);
    return null_space(basis.transpose() * metric, n, eps);
}

Mat metric_orthonormalize(const Mat& basis, const Mat& metric)
{
    if (basis.cols() == 0)
        return basis;
    Mat gram = basis.transpose() * metric * basis;
    Eigen::LLT<Mat> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericalError("metric_orthonormalize: Gram matrix not positive definite");
    // basis * L^{-T} has identity Gram matrix.
    Mat lt = llt.matrixU();
    return lt.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(basis);
}

Mat pinv(const Mat& a, double eps)
{
    if (a.rows() == 0 || a.cols() == 0)
        return Mat::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& s = svd.singularValues();
    double thr = s.maxCoeff() > 0 ? rank_threshold(s, a.rows(), a.cols(), eps) : 0.0;
    Vec inv = Vec::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr && s(i) > 0.0)
            inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double min_singular_value(const Mat& a)
{
    if (a.rows() == 0 || a.cols() == 0)
        return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues().minCoeff();
}

void canonicalize_signs(Mat& basis)
{
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
    {
        Eigen::Index imax = 0;
        basis.col(j).cwiseAbs().maxCoeff(&imax);
        if (basis(imax, j) < 0)
            basis.col(j) *= -1.0;
    }
}

Mat random_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> dist(0.0, 1.0);
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = dist(rng);
    return m;
}

Vec random_normal(Rng& rng, Eigen::Index n)
{
    return random_normal(rng, n, 1).col(0);
}

Vec random_unit(Rng& rng, Eigen::Index n)
{
    Vec v = random_normal(rng, n);
    while (v.norm() == 0.0)
        v = random_normal(rng, n);
    return v / v.norm();
}

Vec nnls(const Mat& a, const Vec& b, int max_iter)
{
    const Eigen::Index n = a.cols();
    Vec x = Vec::Zero(n);
    std::vector<bool> passive(n, false);
    const double tol = 1e-12 * std::max(1.0, a.norm()) * std::max(1.0, b.norm());

    auto solve_passive = [&](Vec& z) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[j])
                idx.push_back(j);
        z = Vec::Zero(n);
        if (idx.empty())
            return;
        Mat ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
            ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
        Vec zp = ap.completeOrthogonalDecomposition().solve(b);
        for (std::size_t k = 0; k < idx.size(); ++k)
            z(idx[k]) = zp(static_cast<Eigen::Index>(k));
    };

    for (int outer = 0; outer < max_iter; ++outer)
    {
        Vec w = a.transpose() * (b - a * x);
        Eigen::Index best = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[j] && w(j) > wmax)
            {
                wmax = w(j);
                best = j;
            }
        if (best < 0)
            break;
        passive[best] = true;

        for (int inner = 0; inner < max_iter; ++inner)
        {
            Vec z;
            solve_passive(z);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && z(j) <= 0.0)
                    feasible = false;
            if (feasible)
            {
                x = z;
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && z(j) <= 0.0)
                    alpha = std::min(alpha, x(j) / (x(j) - z(j)));
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && std::abs(x(j)) <= 1e-15)
                {
                    passive[j] = false;
                    x(j) = 0.0;
                }
        }
    }
    return x;
}

}  // namespace momenta
