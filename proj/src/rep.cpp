#include "momenta/rep.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace momenta {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const Mat& rot90()
{
    static const Mat r = (Mat(2, 2) << 0.0, -1.0, 1.0, 0.0).finished();
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// LieAlgebraAction

LieAlgebraAction::LieAlgebraAction(SymplecticSpace space, std::vector<Mat> generators,
                                   std::optional<StructureConstants> structure_constants)
    : space_(std::move(space)), generators_(std::move(generators)), structure_(std::move(structure_constants))
{
    const Eigen::Index n = space_.dim();
    const Mat& omega = space_.omega();
    for (std::size_t i = 0; i < generators_.size(); ++i)
    {
        const Mat& a = generators_[i];
        if (a.rows() != n || a.cols() != n)
            throw InputError("generator " + std::to_string(i) + " has wrong shape");
        double res = (a.transpose() * omega + omega * a).cwiseAbs().maxCoeff();
        if (res > 1e-12 * std::max(1.0, a.norm() * omega.norm()))
            throw InputError("generator " + std::to_string(i) + " is not infinitesimally symplectic");
    }
    if (structure_)
    {
        const std::size_t k = generators_.size();
        if (structure_->size() != k)
            throw InputError("structure constants have wrong size");
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
            {
                Mat bracket = generators_[i] * generators_[j] - generators_[j] * generators_[i];
                Mat rhs = Mat::Zero(n, n);
                for (std::size_t l = 0; l < k; ++l)
                    rhs += (*structure_)[l](i, j) * generators_[l];
                if ((bracket - rhs).cwiseAbs().maxCoeff() > 1e-10)
                    throw InputError("structure constants do not match generator brackets");
            }
    }
}

Mat LieAlgebraAction::generator(const Vec& xi) const
{
    Mat a = Mat::Zero(space_dim(), space_dim());
    for (Eigen::Index i = 0; i < dim(); ++i)
        a += xi(i) * generators_[i];
    return a;
}

Mat LieAlgebraAction::orbit_matrix(const Vec& x) const
{
    Mat m(space_dim(), dim());
    for (Eigen::Index i = 0; i < dim(); ++i)
        m.col(i) = generators_[i] * x;
    return m;
}

bool LieAlgebraAction::is_abelian() const
{
    for (std::size_t i = 0; i < generators_.size(); ++i)
        for (std::size_t j = i + 1; j < generators_.size(); ++j)
            if ((generators_[i] * generators_[j] - generators_[j] * generators_[i]).cwiseAbs().maxCoeff() > 1e-10)
                return false;
    return true;
}

StructureConstants compute_structure_constants(const std::vector<Mat>& generators, double tol)
{
    const std::size_t k = generators.size();
    StructureConstants c(k, Mat::Zero(k, k));
    if (k == 0)
        return c;
    const Eigen::Index n = generators[0].rows();
    Mat basis(n * n, static_cast<Eigen::Index>(k));
    for (std::size_t l = 0; l < k; ++l)
        basis.col(l) = Eigen::Map<const Vec>(generators[l].data(), n * n);
    auto qr = basis.colPivHouseholderQr();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
        {
            Mat bracket = generators[i] * generators[j] - generators[j] * generators[i];
            Vec b = Eigen::Map<const Vec>(bracket.data(), n * n);
            Vec coeff = qr.solve(b);
            if ((basis * coeff - b).norm() > tol * std::max(1.0, b.norm()))
                throw InputError("generators do not span a Lie algebra");
            for (std::size_t l = 0; l < k; ++l)
                c[l](i, j) = coeff(l);
        }
    return c;
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::vector<Mat> elements) : elements_(std::move(elements))
{
    if (elements_.empty())
        throw InputError("finite group needs at least one element");
    const Eigen::Index n = elements_[0].rows();
    for (const Mat& g : elements_)
        if (g.rows() != n || g.cols() != n)
            throw InputError("finite group elements have inconsistent shapes");
    identity_ = find(Mat::Identity(n, n));
    if (identity_ < 0)
        throw InputError("finite group does not contain the identity");
    const int order = static_cast<int>(elements_.size());
    table_.assign(order, std::vector<int>(order, -1));
    inverse_.assign(order, -1);
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b)
        {
            int p = find(elements_[a] * elements_[b]);
            if (p < 0)
                throw InputError("finite group is not closed under multiplication");
            table_[a][b] = p;
            if (p == identity_)
                inverse_[a] = b;
        }
    for (int a = 0; a < order; ++a)
        if (inverse_[a] < 0)
            throw InputError("finite group element without inverse");
}

int FiniteGroup::find(const Mat& m) const
{
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i].rows() == m.rows() && (elements_[i] - m).cwiseAbs().maxCoeff() <= 1e-9)
            return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------------------
// CompactGroupRep

CompactGroupRep::CompactGroupRep(TorusRep t) : v_(std::move(t))
{
    if (torus().weights.cols() == 0)
        throw InputError("torus weight matrix needs at least one column");
}

Eigen::Index CompactGroupRep::space_dim() const
{
    if (is_finite())
        return finite().elements()[0].rows();
    if (is_torus())
        return 2 * torus().weights.cols();
    return matrix_group().algebra.space_dim();
}

Eigen::Index CompactGroupRep::group_dim() const
{
    if (is_finite())
        return 0;
    if (is_torus())
        return torus().weights.rows();
    return matrix_group().algebra.dim();
}

bool CompactGroupRep::is_abelian() const
{
    if (is_torus())
        return true;
    if (is_matrix_group())
    {
        const auto& mg = matrix_group();
        if (!mg.algebra.is_abelian())
            return false;
        for (const Mat& a : mg.components)
            for (const Mat& b : mg.components)
                if ((a * b - b * a).cwiseAbs().maxCoeff() > 1e-10)
                    return false;
        return true;
    }
    const auto& g = finite();
    for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = 0; b < g.order(); ++b)
            if (g.product(static_cast<int>(a), static_cast<int>(b)) != g.product(static_cast<int>(b), static_cast<int>(a)))
                return false;
    return true;
}

LieAlgebraAction CompactGroupRep::lie_algebra_action(const SymplecticSpace& space) const
{
    if (space.dim() != space_dim())
        throw InputError("representation and space have different dimensions");
    if (is_finite())
        return LieAlgebraAction(space, {}, StructureConstants{});
    if (is_torus())
    {
        const Eigen::Index k = torus().weights.rows();
        return LieAlgebraAction(space, torus_generators(torus().weights), StructureConstants(k, Mat::Zero(k, k)));
    }
    const auto& alg = matrix_group().algebra;
    return LieAlgebraAction(space, alg.generators(), alg.structure_constants());
}

std::vector<Mat> CompactGroupRep::sample_elements(Rng& rng, int count) const
{
    if (is_finite())
        return finite().elements();
    std::vector<Mat> out;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (is_torus())
    {
        const Eigen::Index k = torus().weights.rows();
        for (int s = 0; s < count; ++s)
        {
            Vec t(k);
            for (Eigen::Index i = 0; i < k; ++i)
                t(i) = unif(rng);
            out.push_back(torus_element(torus().weights, t));
        }
        return out;
    }
    const auto& mg = matrix_group();
    std::uniform_int_distribution<std::size_t> pick(0, mg.components.empty() ? 0 : mg.components.size() - 1);
    for (int s = 0; s < count; ++s)
    {
        Vec xi = 2.0 * random_normal(rng, mg.algebra.dim());
        Mat g = matrix_exp(mg.algebra.generator(xi));
        if (!mg.components.empty())
            g = mg.components[pick(rng)] * g;
        out.push_back(g);
    }
    return out;
}

double CompactGroupRep::check_symplectic(const SymplecticSpace& space, Rng& rng, double tol) const
{
    if (space.dim() != space_dim())
        throw InputError("representation and space have different dimensions");
    double worst = 0.0;
    for (const Mat& g : sample_elements(rng, 32))
        worst = std::max(worst, (g.transpose() * space.omega() * g - space.omega()).cwiseAbs().maxCoeff());
    if (worst > tol)
        throw InputError("representation is not symplectic (residual " + std::to_string(worst) + ")");
    return worst;
}

// ---------------------------------------------------------------------------

Mat torus_element(const IMat& weights, const Vec& t)
{
    const Eigen::Index n = weights.cols();
    Mat g = Mat::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        double angle = 0.0;
        for (Eigen::Index i = 0; i < weights.rows(); ++i)
            angle += static_cast<double>(weights(i, j)) * t(i);
        angle = kTwoPi * angle;
        double c = std::cos(angle), s = std::sin(angle);
        g(2 * j, 2 * j) = c;
        g(2 * j, 2 * j + 1) = -s;
        g(2 * j + 1, 2 * j) = s;
        g(2 * j + 1, 2 * j + 1) = c;
    }
    return g;
}

std::vector<Mat> torus_generators(const IMat& weights)
{
    const Eigen::Index n = weights.cols();
    std::vector<Mat> gens;
    for (Eigen::Index i = 0; i < weights.rows(); ++i)
    {
        Mat a = Mat::Zero(2 * n, 2 * n);
        for (Eigen::Index j = 0; j < n; ++j)
            a.block(2 * j, 2 * j, 2, 2) = static_cast<double>(weights(i, j)) * rot90();
        gens.push_back(a);
    }
    return gens;
}

Mat realify(const Eigen::MatrixXcd& m)
{
    Mat r(2 * m.rows(), 2 * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            double a = m(i, j).real(), b = m(i, j).imag();
            r(2 * i, 2 * j) = a;
            r(2 * i, 2 * j + 1) = -b;
            r(2 * i + 1, 2 * j) = b;
            r(2 * i + 1, 2 * j + 1) = a;
        }
    return r;
}

MatrixGroupRep su2_on_c2()
{
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -i, i, 0.0;
    s3 << 1.0, 0.0, 0.0, -1.0;
    std::vector<Mat> gens = {realify(0.5 * i * s1), realify(0.5 * i * s2), realify(0.5 * i * s3)};
    StructureConstants c = compute_structure_constants(gens);
    LieAlgebraAction alg(make_complex_model(2), gens, c);
    return MatrixGroupRep{alg, {Mat::Identity(4, 4)}};
}

Mat matrix_exp(const Mat& a)
{
    return a.exp();
}

Mat invariant_metric(const CompactGroupRep& rep, const Mat& metric)
{
    const Eigen::Index n = rep.space_dim();
    if (metric.rows() != n || metric.cols() != n)
        throw InputError("invariant_metric: metric has wrong shape");
    if (rep.is_finite())
    {
        Mat avg = Mat::Zero(n, n);
        for (const Mat& g : rep.finite().elements())
            avg += g.transpose() * metric * g;
        avg /= static_cast<double>(rep.finite().order());
        return 0.5 * (avg + avg.transpose());
    }
    if (rep.is_torus())
    {
        // Average of R(a)^T B R(b) over the torus keeps the C-linear part of a
        // 2x2 block when w_j = w_l and the C-antilinear part when w_j = -w_l.
        const IMat& w = rep.torus().weights;
        const Eigen::Index m = w.cols();
        const Mat& jj = rot90();
        Mat avg = Mat::Zero(n, n);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
            {
                Mat blk = metric.block(2 * a, 2 * b, 2, 2);
                Mat linear = 0.5 * (blk - jj * blk * jj);
                Mat antilinear = 0.5 * (blk + jj * blk * jj);
                Mat out = Mat::Zero(2, 2);
                if (w.col(a) == w.col(b))
                    out += linear;
                if (w.col(a) == -w.col(b))
                    out += antilinear;
                avg.block(2 * a, 2 * b, 2, 2) = out;
            }
        return 0.5 * (avg + avg.transpose());
    }
    const auto& mg = rep.matrix_group();
    auto invariant = [&](const Mat& m) {
        for (const Mat& a : mg.algebra.generators())
            if ((a.transpose() * m + m * a).cwiseAbs().maxCoeff() > 1e-10)
                return false;
        for (const Mat& g : mg.components)
            if ((g.transpose() * m * g - m).cwiseAbs().maxCoeff() > 1e-10)
                return false;
        return true;
    };
    if (invariant(metric))
        return metric;
    if (invariant(Mat::Identity(n, n)))
        return Mat::Identity(n, n);
    throw InputError("matrix group: neither the supplied metric nor the identity is invariant");
}

}  // namespace momenta
