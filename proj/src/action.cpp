#include "momenta/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "momenta/lattice.hpp"

namespace momenta {

MomentumValue quadratic_momentum(const LieAlgebraAction& action, const Vec& x)
{
    return MomentumValue{momentum(action, x), Mat::Identity(action.dim(), action.dim())};
}

Vec momentum(const LieAlgebraAction& action, const Vec& x)
{
    if (x.size() != action.space_dim())
        throw InputError("momentum: point has wrong dimension");
    Vec j(action.dim());
    Vec ox = action.space().omega().transpose() * x;  // x^T omega as a column
    for (Eigen::Index i = 0; i < action.dim(); ++i)
        j(i) = 0.5 * ox.dot(action.generators()[i] * x);
    return j;
}

Mat momentum_jacobian(const LieAlgebraAction& action, const Vec& x)
{
    Mat d(action.dim(), action.space_dim());
    Vec ox = action.space().omega().transpose() * x;
    for (Eigen::Index i = 0; i < action.dim(); ++i)
        d.row(i) = ox.transpose() * action.generators()[i];
    return d;
}

double momentum_relation_residual(const LieAlgebraAction& action, const Vec& x, const Vec& v, Eigen::Index i)
{
    const Mat& a = action.generators().at(static_cast<std::size_t>(i));
    const SymplecticSpace& s = action.space();
    return std::abs(s.form(a * x, v) + s.form(x, a * v));
}

std::optional<double> infinitesimal_equivariance_residual(const LieAlgebraAction& action, const Vec& x)
{
    if (!action.structure_constants())
        return std::nullopt;
    const auto& c = *action.structure_constants();
    Vec j = momentum(action, x);
    Mat dj = momentum_jacobian(action, x);
    double worst = 0.0;
    for (Eigen::Index jj = 0; jj < action.dim(); ++jj)
    {
        Vec lhs = dj * (action.generators()[jj] * x);
        for (Eigen::Index i = 0; i < action.dim(); ++i)
        {
            double rhs = 0.0;
            for (Eigen::Index l = 0; l < action.dim(); ++l)
                rhs += c[l](i, jj) * j(l);
            worst = std::max(worst, std::abs(lhs(i) - rhs));
        }
    }
    return worst;
}

Mat coadjoint_matrix(const LieAlgebraAction& action, const Mat& g)
{
    const Eigen::Index k = action.dim();
    const Eigen::Index n = action.space_dim();
    Mat basis(n * n, k);
    for (Eigen::Index l = 0; l < k; ++l)
        basis.col(l) = Eigen::Map<const Vec>(action.generators()[l].data(), n * n);
    auto qr = basis.colPivHouseholderQr();
    Mat ginv = g.inverse();
    Mat c(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
    {
        Mat conj = ginv * action.generators()[i] * g;
        Vec b = Eigen::Map<const Vec>(conj.data(), n * n);
        Vec coeff = qr.solve(b);
        if ((basis * coeff - b).norm() > 1e-9 * std::max(1.0, b.norm()))
            throw InputError("coadjoint_matrix: g does not normalize the Lie algebra");
        c.row(i) = coeff.transpose();
    }
    return c;
}

double group_equivariance_residual(const LieAlgebraAction& action, const Mat& g, const Vec& x)
{
    Vec lhs = momentum(action, g * x);
    Vec rhs = coadjoint_matrix(action, g) * momentum(action, x);
    return action.dim() == 0 ? 0.0 : (lhs - rhs).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Stabilizers

namespace {

std::string join(const std::vector<long long>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

StabilizerDescriptor finite_stabilizer(const FiniteGroup& g, const Vec& x)
{
    StabilizerDescriptor d;
    for (std::size_t i = 0; i < g.order(); ++i)
        if ((g.elements()[i] * x - x).norm() <= 1e-9)
            d.finite_elements.push_back(static_cast<int>(i));
    d.components = static_cast<long long>(d.finite_elements.size());
    d.full_group = d.finite_elements.size() == g.order();

    // Canonical conjugacy key: lexicographically smallest sorted conjugate.
    std::vector<long long> best;
    for (std::size_t a = 0; a < g.order(); ++a)
    {
        int ai = static_cast<int>(a);
        std::vector<long long> conj;
        for (int h : d.finite_elements)
            conj.push_back(g.product(g.product(ai, h), g.inverse(ai)));
        std::sort(conj.begin(), conj.end());
        if (best.empty() || conj < best)
            best = conj;
    }
    d.orbit_type = "finite:" + join(best);
    return d;
}

StabilizerDescriptor torus_stabilizer(const IMat& w, const Vec& x)
{
    StabilizerDescriptor d;
    const Eigen::Index k = w.rows();
    for (Eigen::Index j = 0; j < w.cols(); ++j)
        if (std::hypot(x(2 * j), x(2 * j + 1)) > 1e-9)
            d.support.push_back(j);
    IMat ws(static_cast<Eigen::Index>(d.support.size()), k);
    for (std::size_t r = 0; r < d.support.size(); ++r)
        ws.row(static_cast<Eigen::Index>(r)) = w.col(d.support[r]).transpose();

    d.lattice_hnf = hermite_normal_form(ws);
    if (ws.rows() > 0)
    {
        SmithForm s = smith_normal_form(ws);
        d.smith_v = s.v;
        d.smith_diagonal = s.diagonal;
    }
    else
    {
        d.smith_v = IMat::Identity(k, k);
    }
    const Eigen::Index rank = static_cast<Eigen::Index>(d.smith_diagonal.size());
    d.dimension = k - rank;
    d.components = 1;
    for (long long di : d.smith_diagonal)
        d.components *= di;
    d.full_group = d.lattice_hnf.rows() == 0;

    // Stabilizer algebra: null space of W_S.
    Mat wsd = ws.cast<double>();
    d.algebra_basis = null_space(wsd, k);

    std::ostringstream os;
    os << "torus:";
    for (Eigen::Index r = 0; r < d.lattice_hnf.rows(); ++r)
    {
        os << (r ? ";" : "");
        for (Eigen::Index c = 0; c < k; ++c)
            os << (c ? "," : "") << d.lattice_hnf(r, c);
    }
    d.orbit_type = os.str();
    return d;
}

StabilizerDescriptor matrix_stabilizer(const MatrixGroupRep& mg, const Vec& x)
{
    StabilizerDescriptor d;
    const auto& alg = mg.algebra;
    const Eigen::Index k = alg.dim();
    d.algebra_basis = null_space(alg.orbit_matrix(x), k, 1e-10);
    d.dimension = d.algebra_basis.cols();
    for (std::size_t c = 0; c < mg.components.size(); ++c)
        if ((mg.components[c] * x - x).norm() <= 1e-9)
            d.discrete_fixing.push_back(static_cast<int>(c));
    d.components = static_cast<long long>(std::max<std::size_t>(1, d.discrete_fixing.size()));
    d.full_group = d.dimension == k && d.discrete_fixing.size() == std::max<std::size_t>(1, mg.components.size());

    // Dimension of the centralizer of g_m inside g, a conjugation invariant.
    const Eigen::Index n = alg.space_dim();
    Eigen::Index centralizer = k;
    if (d.dimension > 0 && k > 0)
    {
        Mat sys(n * n * d.dimension, k);
        for (Eigen::Index b = 0; b < d.dimension; ++b)
        {
            Mat ab = alg.generator(d.algebra_basis.col(b));
            for (Eigen::Index l = 0; l < k; ++l)
            {
                Mat br = ab * alg.generators()[l] - alg.generators()[l] * ab;
                sys.block(b * n * n, l, n * n, 1) = Eigen::Map<const Vec>(br.data(), n * n);
            }
        }
        centralizer = null_space(sys, k, 1e-10).cols();
    }
    std::ostringstream os;
    os << "matrix:dim=" << d.dimension << ";centralizer=" << centralizer << ";discrete=" << d.discrete_fixing.size();
    d.orbit_type = os.str();
    return d;
}

}  // namespace

StabilizerDescriptor stabilizer(const CompactGroupRep& rep, const Vec& x)
{
    if (x.size() != rep.space_dim())
        throw InputError("stabilizer: point has wrong dimension");
    if (rep.is_finite())
        return finite_stabilizer(rep.finite(), x);
    if (rep.is_torus())
        return torus_stabilizer(rep.torus().weights, x);
    return matrix_stabilizer(rep.matrix_group(), x);
}

std::vector<Mat> stabilizer_elements(const CompactGroupRep& rep, const StabilizerDescriptor& stab, int count)
{
    std::vector<Mat> out;
    if (rep.is_finite())
    {
        for (int i : stab.finite_elements)
            out.push_back(rep.finite().elements()[i]);
        return out;
    }
    Rng rng(0x57ab);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (rep.is_torus())
    {
        const IMat& w = rep.torus().weights;
        const Eigen::Index k = w.rows();
        const Eigen::Index r = static_cast<Eigen::Index>(stab.smith_diagonal.size());
        const long long ncomp = std::max<long long>(1, stab.components);
        const int total = static_cast<int>(std::max<long long>(count, std::min<long long>(ncomp, 256)));
        for (int e = 0; e < total; ++e)
        {
            Vec s(k);
            long long idx = e % ncomp;
            for (Eigen::Index i = 0; i < r; ++i)
            {
                long long di = stab.smith_diagonal[static_cast<std::size_t>(i)];
                s(i) = static_cast<double>(idx % di) / static_cast<double>(di);
                idx /= di;
            }
            for (Eigen::Index i = r; i < k; ++i)
                s(i) = e == 0 ? 0.0 : unif(rng);
            Vec t = stab.smith_v.cast<double>() * s;
            out.push_back(torus_element(w, t));
        }
        return out;
    }
    const auto& mg = rep.matrix_group();
    const Eigen::Index n = rep.space_dim();
    std::vector<Mat> discrete;
    for (int c : stab.discrete_fixing)
        discrete.push_back(mg.components[static_cast<std::size_t>(c)]);
    if (discrete.empty())
        discrete.push_back(Mat::Identity(n, n));
    for (int e = 0; e < count; ++e)
    {
        Mat g = Mat::Identity(n, n);
        if (e > 0 && stab.algebra_basis.cols() > 0)
        {
            Vec coeff = 2.0 * random_normal(rng, stab.algebra_basis.cols());
            g = matrix_exp(mg.algebra.generator(stab.algebra_basis * coeff));
        }
        out.push_back(discrete[static_cast<std::size_t>(e) % discrete.size()] * g);
    }
    return out;
}

std::vector<Eigen::Index> torus_fixed_pairs(const IMat& weights, const StabilizerDescriptor& stab)
{
    std::vector<Eigen::Index> out;
    IMat hnf = stab.lattice_hnf;
    if (hnf.cols() != weights.rows())
        hnf.resize(0, weights.rows());
    for (Eigen::Index j = 0; j < weights.cols(); ++j)
        if (in_row_lattice(hnf, weights.col(j)))
            out.push_back(j);
    return out;
}

Mat stabilizer_fixed_subspace(const CompactGroupRep& rep, const StabilizerDescriptor& stab)
{
    const Eigen::Index n = rep.space_dim();
    if (rep.is_torus())
    {
        auto pairs = torus_fixed_pairs(rep.torus().weights, stab);
        Mat b = Mat::Zero(n, 2 * static_cast<Eigen::Index>(pairs.size()));
        for (std::size_t c = 0; c < pairs.size(); ++c)
        {
            b(2 * pairs[c], 2 * c) = 1.0;
            b(2 * pairs[c] + 1, 2 * c + 1) = 1.0;
        }
        return b;
    }
    if (rep.is_finite())
    {
        Mat avg = Mat::Zero(n, n);
        for (int i : stab.finite_elements)
            avg += rep.finite().elements()[i];
        avg /= static_cast<double>(std::max<std::size_t>(1, stab.finite_elements.size()));
        return orth(avg, 1e-10);
    }
    const auto& mg = rep.matrix_group();
    std::vector<Mat> blocks;
    for (Eigen::Index b = 0; b < stab.algebra_basis.cols(); ++b)
        blocks.push_back(mg.algebra.generator(stab.algebra_basis.col(b)));
    for (int c : stab.discrete_fixing)
        blocks.push_back(mg.components[static_cast<std::size_t>(c)] - Mat::Identity(n, n));
    if (blocks.empty())
        return Mat::Identity(n, n);
    Mat stacked(n * static_cast<Eigen::Index>(blocks.size()), n);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = blocks[i];
    return null_space(stacked, n, 1e-10);
}

// ---------------------------------------------------------------------------
// Hamiltonian flows

Vec gradient(const HamiltonianSystem& system, const Vec& x)
{
    if (system.grad)
        return system.grad(x);
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        g(i) = (system.h(xp) - system.h(xm)) / (2.0 * h);
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return g;
}

Vec hamiltonian_vector_field(const SymplecticSpace& space, const HamiltonianSystem& system, const Vec& x)
{
    return space.omega().partialPivLu().solve(gradient(system, x));
}

Vec rk4_step(const std::function<Vec(const Vec&)>& f, const Vec& x, double dt)
{
    Vec k1 = f(x);
    Vec k2 = f(x + 0.5 * dt * k1);
    Vec k3 = f(x + 0.5 * dt * k2);
    Vec k4 = f(x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

FlowResult hamiltonian_flow_noether(const LieAlgebraAction& action, const HamiltonianSystem& system,
                                    const Vec& x0, double t_end, double dt, int record_every,
                                    double divergence_bound)
{
    if (dt <= 0.0 || t_end < 0.0)
        throw InputError("hamiltonian_flow_noether: need dt > 0 and t_end >= 0");
    auto lu = action.space().omega().partialPivLu();
    auto field = [&](const Vec& x) -> Vec { return lu.solve(gradient(system, x)); };

    FlowResult out;
    const Vec j0 = momentum(action, x0);
    const int steps = static_cast<int>(std::llround(t_end / dt));
    Vec x = x0;
    out.trajectory.push_back(x);
    for (int s = 1; s <= steps; ++s)
    {
        x = rk4_step(field, x, dt);
        if (!x.allFinite() || x.norm() > divergence_bound)
        {
            out.diverged = true;
            break;
        }
        out.steps = s;
        if (action.dim() > 0)
            out.max_drift = std::max(out.max_drift, (momentum(action, x) - j0).cwiseAbs().maxCoeff());
        if (record_every > 0 && (s % record_every == 0 || s == steps))
            out.trajectory.push_back(x);
    }
    out.final_state = x;
    return out;
}

double invariance_residual(const CompactGroupRep& rep, const HamiltonianSystem& system, Rng& rng, int samples)
{
    double worst = 0.0;
    auto elems = rep.sample_elements(rng, samples);
    for (const Mat& g : elems)
    {
        Vec x = random_normal(rng, rep.space_dim());
        worst = std::max(worst, std::abs(system.h(g * x) - system.h(x)));
    }
    return worst;
}

Mat coadjoint_stabilizer(const LieAlgebraAction& action, const Vec& mu)
{
    const Eigen::Index k = action.dim();
    if (k == 0 || action.is_abelian() || mu.norm() <= 1e-12)
        return Mat::Identity(k, k);
    if (!action.structure_constants())
        throw InputError("coadjoint stabilizer needs structure constants for nonabelian mu != 0");
    // ad(i, j) = sum_l c_ij^l mu_l = <mu, [xi_i, xi_j]>.
    Mat ad(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
        {
            double v = 0.0;
            for (Eigen::Index l = 0; l < k; ++l)
                v += (*action.structure_constants())[l](i, j) * mu(l);
            ad(i, j) = v;
        }
    return null_space(ad, k, 1e-10);
}

}  // namespace momenta
