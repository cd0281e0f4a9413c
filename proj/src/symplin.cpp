#include "momenta/symplin.hpp"

#include <cmath>

namespace momenta {

Subspace symplectic_orthogonal(const SymplecticSpace& space, const Subspace& v)
{
    if (v.ambient_dim() != space.dim())
        throw InputError("subspace does not live in the given space");
    Mat rows = v.basis().transpose() * space.omega();
    return Subspace(space.dim(), null_space(rows, space.dim()));
}

DoubleOrthogonalResult double_orthogonal_check(const SymplecticSpace& space, const Subspace& v, double tol)
{
    Subspace vv = symplectic_orthogonal(space, symplectic_orthogonal(space, v));
    DoubleOrthogonalResult r;
    r.distance = v.distance(vv);
    r.closed = r.distance <= tol;
    return r;
}

SymplecticSubspaceRoutes symplectic_subspace_routes(const SymplecticSpace& space, const Subspace& v)
{
    SymplecticSubspaceRoutes r;
    const Eigen::Index k = v.dim();
    const Mat& b = v.basis();
    Mat restricted = b.transpose() * space.omega() * b;
    // Singular values are measured against the ambient form, not the restriction.
    const double scale = std::max(1.0, space.omega().norm());
    Eigen::Index rk = 0;
    if (k > 0)
    {
        Eigen::JacobiSVD<Mat> svd(restricted);
        for (Eigen::Index i = 0; i < k; ++i)
            if (svd.singularValues()(i) > 1e-10 * scale)
                ++rk;
    }
    r.restricted_rank_full = rk == k;

    Subspace vo = symplectic_orthogonal(space, v);
    r.meets_orthogonal_trivially = span_intersection(b, vo.basis(), 1e-10).cols() == 0;

    // Gamma_V(v) = omega(v, .)|_V. Solve for preimages of each dual basis functional
    // and check the residual.
    if (k == 0)
    {
        r.gamma_surjective = true;
    }
    else
    {
        Mat gamma = restricted.transpose();  // column c maps to functional row-vector coefficients
        Mat target = Mat::Identity(k, k);
        Mat sol = gamma.completeOrthogonalDecomposition().solve(target);
        r.gamma_surjective = (gamma * sol - target).norm() <= 1e-8 && sol.norm() * 1e-10 * scale <= 1.0;
    }
    return r;
}

bool is_symplectic_subspace(const SymplecticSpace& space, const Subspace& v)
{
    SymplecticSubspaceRoutes r = symplectic_subspace_routes(space, v);
    if (r.restricted_rank_full != r.meets_orthogonal_trivially || r.restricted_rank_full != r.gamma_surjective)
        throw NumericalError("symplectic subspace tests disagree; subspace is numerically borderline");
    return r.restricted_rank_full;
}

ComplexStructure compatible_complex_structure(const SymplecticSpace& space)
{
    const Mat& m = space.metric();
    Eigen::SelfAdjointEigenSolver<Mat> me(m);
    if (me.info() != Eigen::Success || me.eigenvalues().minCoeff() <= 0.0)
        throw NumericalError("metric square root failed");
    Mat r = me.eigenvectors() * me.eigenvalues().cwiseSqrt().asDiagonal() * me.eigenvectors().transpose();
    Mat rinv = me.eigenvectors() * me.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
               me.eigenvectors().transpose();

    // B = R A R^{-1} with A = -M^{-1} omega is skew-symmetric.
    Mat b = -rinv * space.omega() * rinv;
    b = (0.5 * (b - b.transpose())).eval();
    Mat p = b.transpose() * b;  // = -B^2, symmetric positive definite
    Eigen::SelfAdjointEigenSolver<Mat> pe(0.5 * (p + p.transpose()));
    if (pe.info() != Eigen::Success || pe.eigenvalues().minCoeff() <= 0.0)
        throw NumericalError("compatible complex structure: -A^2 is not positive definite");
    Mat pinvsqrt = pe.eigenvectors() * pe.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   pe.eigenvectors().transpose();
    Mat jb = b * pinvsqrt;
    Mat j = rinv * jb * r;

    const Eigen::Index n = space.dim();
    if ((j * j + Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw NumericalError("compatible complex structure: J^2 != -I (ill-conditioned omega/metric)");
    Mat g = space.omega() * j;
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, g.norm()))
        throw NumericalError("compatible complex structure: associated form not symmetric");
    Eigen::LLT<Mat> llt(0.5 * (g + g.transpose()));
    if (llt.info() != Eigen::Success)
        throw NumericalError("compatible complex structure: associated form not positive definite");
    return ComplexStructure{j};
}

Mat associated_metric(const SymplecticSpace& space, const ComplexStructure& j)
{
    Mat g = space.omega() * j.j;
    return 0.5 * (g + g.transpose());
}

Mat standard_omega(Eigen::Index n)
{
    Mat omega = Mat::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = Mat::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return omega;
}

Mat darboux_basis(const SymplecticSpace& space)
{
    const Eigen::Index dim = space.dim();
    const Eigen::Index n = dim / 2;
    const Mat& omega = space.omega();
    Mat pool = Mat::Identity(dim, dim);
    Mat s(dim, dim);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        // Pivot on the pair with largest |omega|.
        Mat w = pool.transpose() * omega * pool;
        Eigen::Index bi = 0, bj = 0;
        w.cwiseAbs().maxCoeff(&bi, &bj);
        if (std::abs(w(bi, bj)) == 0.0)
            throw NumericalError("darboux_basis: form vanishes on the remaining pool");
        Vec e = pool.col(bi);
        Vec f = pool.col(bj) / w(bi, bj);
        s.col(k) = e;
        s.col(n + k) = f;

        Mat next(dim, pool.cols() - 2);
        Eigen::Index c = 0;
        for (Eigen::Index i = 0; i < pool.cols(); ++i)
        {
            if (i == bi || i == bj)
                continue;
            Vec x = pool.col(i);
            double xf = x.dot(omega * f);
            double xe = x.dot(omega * e);
            next.col(c++) = x - xf * e + xe * f;
        }
        pool = next;
    }
    return s;
}

Mat symplectic_projector(const SymplecticSpace& space, const Mat& basis)
{
    const Eigen::Index n = space.dim();
    if (basis.cols() == 0)
        return Mat::Zero(n, n);
    Mat restricted = basis.transpose() * space.omega() * basis;
    return basis * restricted.fullPivLu().solve(basis.transpose() * space.omega());
}

FixedPointSplitting fixed_point_splitting(const SymplecticSpace& space, const CompactGroupRep& rep)
{
    const Eigen::Index n = space.dim();
    Rng rng(0x5eed);
    rep.check_symplectic(space, rng, 1e-10);

    Mat fixed_basis;
    if (rep.is_finite())
    {
        Mat avg = Mat::Zero(n, n);
        for (const Mat& g : rep.finite().elements())
            avg += g;
        avg /= static_cast<double>(rep.finite().order());
        // avg is a projector: its nonzero singular values are >= 1, so an
        // absolute cut is safe where a relative one fails for avg ~ 0.
        Eigen::JacobiSVD<Mat> svd(avg, Eigen::ComputeFullU);
        Eigen::Index r = 0;
        while (r < svd.singularValues().size() && svd.singularValues()(r) > 0.5)
            ++r;
        fixed_basis = svd.matrixU().leftCols(r);
    }
    else if (rep.is_torus())
    {
        const IMat& w = rep.torus().weights;
        std::vector<Eigen::Index> zero;
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            if (w.col(j).isZero())
                zero.push_back(j);
        fixed_basis = Mat::Zero(n, 2 * static_cast<Eigen::Index>(zero.size()));
        for (std::size_t c = 0; c < zero.size(); ++c)
        {
            fixed_basis(2 * zero[c], 2 * c) = 1.0;
            fixed_basis(2 * zero[c] + 1, 2 * c + 1) = 1.0;
        }
    }
    else
    {
        const auto& mg = rep.matrix_group();
        std::vector<Mat> blocks = mg.algebra.generators();
        for (const Mat& g : mg.components)
            blocks.push_back(g - Mat::Identity(n, n));
        Mat stacked(n * static_cast<Eigen::Index>(blocks.size()), n);
        for (std::size_t i = 0; i < blocks.size(); ++i)
            stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = blocks[i];
        fixed_basis = null_space(stacked, n, 1e-10);
    }

    Subspace fixed(n, fixed_basis);
    if (!is_symplectic_subspace(space, fixed))
        throw NumericalError("fixed subspace is not symplectic");
    Subspace complement = symplectic_orthogonal(space, fixed);

    FixedPointSplitting out{fixed, complement, 0.0, 0.0};
    Mat psum = symplectic_projector(space, fixed.basis()) + symplectic_projector(space, complement.basis());
    out.projector_sum_residual = (psum - Mat::Identity(n, n)).norm();
    for (const Mat& g : rep.sample_elements(rng, 16))
        if (fixed.dim() > 0)
            out.invariance_residual =
                std::max(out.invariance_residual, (g * fixed.basis() - fixed.basis()).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace momenta
