#include "momenta/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momenta {

namespace {

Vec random_in_ball(Rng& rng, Eigen::Index n, double radius)
{
    if (n == 0)
        return Vec(0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(n));
    return r * random_unit(rng, n);
}

Mat average_projector(const Mat& p, const std::vector<Mat>& group)
{
    if (group.empty())
        return p;
    Mat avg = Mat::Zero(p.rows(), p.cols());
    for (const Mat& g : group)
        avg += g * p * g.inverse();
    avg /= static_cast<double>(group.size());
    return 0.5 * (avg + avg.transpose());
}

/// Central-difference directional derivative.
Vec directional(const std::function<Vec(const Vec&)>& f, const Vec& x, const Vec& w, double h)
{
    return (f(x + h * w) - f(x - h * w)) / (2.0 * h);
}

}  // namespace

// ---------------------------------------------------------------------------
// Maps and splittings

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, Eigen::Index target_dim)
{
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
    Mat jac(target_dim, x.size());
    Vec xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return jac;
}

Mat SmoothMap::jacobian_at(const Vec& x) const
{
    if (jacobian)
        return jacobian(x);
    return finite_difference_jacobian(f, x, target_dim);
}

double jacobian_consistency(const SmoothMap& map)
{
    Mat analytic = map.jacobian_at(map.base_point);
    Mat fd = finite_difference_jacobian(map.f, map.base_point, map.target_dim);
    if (analytic.size() == 0)
        return 0.0;
    return (analytic - fd).norm() / std::max(1.0, fd.norm());
}

LinearSplitting split_jacobian(const Mat& t, double tol)
{
    const Eigen::Index p = t.rows();
    const Eigen::Index n = t.cols();
    LinearSplitting s;
    s.tol = tol;
    if (p == 0 || n == 0)
    {
        s.ker = Mat::Identity(n, n);
        s.coimg = Mat(n, 0);
        s.img = Mat(p, 0);
        s.coker = Mat::Identity(p, p);
        s.t_hat = Mat(0, 0);
        s.singular_values = Vec(0);
        return s;
    }
    Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    s.singular_values = sv;
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > tol)
        ++r;
    // Ill-separated: some singular value lies within a factor 10 of the threshold.
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 0.1 * tol && sv(i) < 10.0 * tol)
            s.ill_separated = true;
    s.coimg = svd.matrixV().leftCols(r);
    s.ker = svd.matrixV().rightCols(n - r);
    s.img = svd.matrixU().leftCols(r);
    s.coker = svd.matrixU().rightCols(p - r);
    canonicalize_signs(s.ker);
    canonicalize_signs(s.coker);
    s.t_hat = s.img.transpose() * t * s.coimg;
    return s;
}

LinearSplitting split_jacobian(const Mat& t)
{
    double smax = 0.0;
    if (t.size() > 0)
        smax = Eigen::JacobiSVD<Mat>(t).singularValues()(0);
    return split_jacobian(t, 1e-8 * (1.0 + smax));
}

LinearSplitting equivariant_split_jacobian(const Mat& t, double tol, const std::vector<Mat>& domain_group,
                                           const std::vector<Mat>& target_group)
{
    LinearSplitting s = split_jacobian(t, tol);
    const Eigen::Index n = t.cols();
    const Eigen::Index p = t.rows();
    auto rebuild = [](const Mat& basis, Eigen::Index dim, const std::vector<Mat>& group) {
        Mat pk = average_projector(projector(basis, dim), group);
        Eigen::SelfAdjointEigenSolver<Mat> es(pk);
        // Eigenvalues near 1 span the averaged subspace.
        Mat out = es.eigenvectors().rightCols(basis.cols());
        canonicalize_signs(out);
        return out;
    };
    if (!domain_group.empty() && n > 0)
    {
        s.ker = rebuild(s.ker, n, domain_group);
        s.coimg = rebuild(s.coimg, n, domain_group);
    }
    if (!target_group.empty() && p > 0)
    {
        s.coker = rebuild(s.coker, p, target_group);
        s.img = rebuild(s.img, p, target_group);
    }
    s.t_hat = s.img.transpose() * t * s.coimg;
    return s;
}

NewtonResult damped_newton(const std::function<Vec(const Vec&)>& g, const std::function<Mat(const Vec&)>& dg,
                           Vec x0, int max_iter, double step_tol)
{
    NewtonResult out;
    out.x = std::move(x0);
    if (out.x.size() == 0)
    {
        out.converged = true;
        return out;
    }
    Vec r = g(out.x);
    out.residual = r.norm();
    for (int it = 0; it < max_iter; ++it)
    {
        out.iterations = it + 1;
        if (out.residual == 0.0)
        {
            out.converged = true;
            return out;
        }
        Mat jac = dg(out.x);
        Vec step = -jac.fullPivLu().solve(r);
        if (!step.allFinite())
            return out;
        double lambda = 1.0;
        Vec trial = out.x + step;
        Vec rt = g(trial);
        while (rt.norm() > out.residual && lambda > 1.0 / 1024.0)
        {
            lambda *= 0.5;
            trial = out.x + lambda * step;
            rt = g(trial);
        }
        double step_norm = (lambda * step).norm();
        out.x = trial;
        r = rt;
        out.residual = r.norm();
        if (step_norm <= step_tol * (1.0 + out.x.norm()))
        {
            out.converged = out.residual <= 1e-8 * (1.0 + out.x.norm());
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// NormalFormData

NormalFormData::NormalFormData(SmoothMap map, LinearSplitting split) : map_(std::move(map)), split_(std::move(split))
{
    if (map_.base_point.size() != map_.domain_dim)
        throw InputError("normal form: base point has wrong dimension");
    f_m_ = map_.f(map_.base_point);
    if (f_m_.size() != map_.target_dim)
        throw InputError("normal form: map returned wrong target dimension");
    if (split_.rank() > 0)
    {
        auto lu = split_.t_hat.fullPivLu();
        if (!lu.isInvertible())
            throw NumericalError("normal form: T_hat is singular");
        t_hat_inv_ = lu.inverse();
    }
    else
    {
        t_hat_inv_ = Mat(0, 0);
    }
    validity_radius_ = compute_validity_radius();
}

Vec NormalFormData::shifted(const Vec& u) const
{
    return map_.f(map_.base_point + u) - f_m_;
}

Vec NormalFormData::embed(const Vec& x) const
{
    return split_.ker * x.head(ker_dim()) + split_.coimg * x.tail(rank());
}

Vec NormalFormData::psi(const Vec& x) const
{
    Vec y(chart_dim());
    y.head(ker_dim()) = x.head(ker_dim());
    if (rank() > 0)
        y.tail(rank()) = t_hat_inv_ * (split_.img.transpose() * shifted(embed(x)));
    return y;
}

NewtonResult NormalFormData::psi_inverse(const Vec& y) const
{
    const Eigen::Index dk = ker_dim();
    const Vec a = y.head(dk);
    const Vec b = y.tail(rank());
    auto full = [&](const Vec& x2) {
        Vec x(chart_dim());
        x.head(dk) = a;
        x.tail(rank()) = x2;
        return x;
    };
    auto g = [&](const Vec& x2) -> Vec {
        return t_hat_inv_ * (split_.img.transpose() * shifted(embed(full(x2)))) - b;
    };
    auto dg = [&](const Vec& x2) -> Mat {
        Mat jac = map_.jacobian_at(map_.base_point + embed(full(x2)));
        return t_hat_inv_ * split_.img.transpose() * jac * split_.coimg;
    };
    NewtonResult nr = damped_newton(g, dg, b);
    nr.x = full(nr.x);
    return nr;
}

Vec NormalFormData::psi_inverse_or_throw(const Vec& y) const
{
    NewtonResult nr = psi_inverse(y);
    if (!nr.converged)
        throw NumericalError("psi inverse: Newton did not converge (residual " + std::to_string(nr.residual) + ")");
    return nr.x;
}

Vec NormalFormData::target_coords(const Vec& displacement) const
{
    Vec y(coker_dim() + rank());
    y.head(coker_dim()) = split_.coker.transpose() * displacement;
    y.tail(rank()) = split_.img.transpose() * displacement;
    return y;
}

Vec NormalFormData::phi(const Vec& y) const
{
    Vec x(chart_dim());
    x.head(ker_dim()).setZero();
    x.tail(rank()) = t_hat_inv_ * y.tail(rank());
    Vec out = y;
    out.head(coker_dim()) += split_.coker.transpose() * shifted(embed(psi_inverse_or_throw(x)));
    return out;
}

Vec NormalFormData::phi_inverse(const Vec& z) const
{
    Vec x(chart_dim());
    x.head(ker_dim()).setZero();
    x.tail(rank()) = t_hat_inv_ * z.tail(rank());
    Vec out = z;
    out.head(coker_dim()) -= split_.coker.transpose() * shifted(embed(psi_inverse_or_throw(x)));
    return out;
}

Vec NormalFormData::f_sing(const Vec& x) const
{
    if (coker_dim() == 0)
        return Vec(0);
    Vec x0 = x;
    x0.head(ker_dim()).setZero();
    Vec full = split_.coker.transpose() * shifted(embed(psi_inverse_or_throw(x)));
    Vec base = split_.coker.transpose() * shifted(embed(psi_inverse_or_throw(x0)));
    return full - base;
}

Vec NormalFormData::normal_form(const Vec& x) const
{
    Vec out(coker_dim() + rank());
    out.head(coker_dim()) = f_sing(x);
    out.tail(rank()) = split_.t_hat * x.tail(rank());
    return out;
}

Mat NormalFormData::kernel_graph_derivative(const Vec& x1) const
{
    const Eigen::Index dk = ker_dim();
    Vec y = Vec::Zero(chart_dim());
    y.head(dk) = x1;
    Vec x = psi_inverse_or_throw(y);
    Mat d = Mat::Zero(chart_dim(), dk);
    d.topRows(dk) = Mat::Identity(dk, dk);
    if (rank() > 0)
    {
        Mat m = split_.img.transpose() * map_.jacobian_at(map_.base_point + embed(x));
        d.bottomRows(rank()) = -(m * split_.coimg).fullPivLu().solve(m * split_.ker);
    }
    return d;
}

double NormalFormData::compute_validity_radius() const
{
    const Eigen::Index d = chart_dim();
    if (rank() == 0)
        return 1.0;
    Rng rng(0xd1ad);
    std::vector<Vec> dirs;
    for (int i = 0; i < 32; ++i)
        dirs.push_back(random_unit(rng, d));
    double r = 1.0;
    for (int level = 0; level <= 20; ++level, r *= 0.5)
    {
        bool ok = true;
        for (const Vec& u : dirs)
        {
            Vec p = r * u;
            Vec y = psi(p);
            if (!y.allFinite())
            {
                ok = false;
                break;
            }
            NewtonResult nr = psi_inverse(y);
            if (!nr.converged || (nr.x - p).norm() > 1e-8 * (1.0 + p.norm()))
            {
                ok = false;
                break;
            }
        }
        if (ok)
            return r;
    }
    throw NumericalError("no local inversion: Newton fails at every dyadic radius down to 2^-20");
}

std::shared_ptr<NormalFormData> deform_domain(const SmoothMap& map, const LinearSplitting& split)
{
    return std::make_shared<NormalFormData>(map, split);
}

double deform_target_check(const NormalFormData& nf, Rng& rng, int samples)
{
    const Eigen::Index q = nf.coker_dim();
    const Eigen::Index r = nf.rank();
    double worst = 0.0;
    const double h = 1e-6;
    for (int s = 0; s < samples; ++s)
    {
        Vec y = Vec::Zero(q + r);
        y.tail(r) = random_in_ball(rng, r, 0.25 * nf.validity_radius());
        y.head(q) = random_in_ball(rng, q, 0.25);
        for (Eigen::Index i = 0; i < q; ++i)
        {
            Vec e = Vec::Zero(q + r);
            e(i) = 1.0;
            Vec col = (nf.phi(y + h * e) - nf.phi(y - h * e)) / (2.0 * h);
            worst = std::max(worst, (col - e).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

NormalFormResult compute_normal_form(const SmoothMap& map, Rng& rng, int samples)
{
    return compute_normal_form(map, split_jacobian(map.jacobian_at(map.base_point)), rng, samples);
}

NormalFormResult compute_normal_form(const SmoothMap& map, const LinearSplitting& split, Rng& rng, int samples)
{
    NormalFormResult out;
    out.data = deform_domain(map, split);
    const NormalFormData& nf = *out.data;
    const Eigen::Index dk = nf.ker_dim();
    const Eigen::Index r = nf.rank();
    const double radius = 0.5 * nf.validity_radius();
    VerificationReport& rep = out.report;
    if (split.ill_separated)
        rep.notes.push_back("ill-separated rank: singular values cluster around the tolerance");
    rep.notes.push_back("validity_radius=" + std::to_string(nf.validity_radius()));

    rep.add("jacobian_consistency", 1e-5).observe(jacobian_consistency(map), map.base_point);

    {
        InvariantCheck& c = rep.add("f_sing_vanishes_on_coimg", 1e-8);
        for (int s = 0; s < samples; ++s)
        {
            Vec x = Vec::Zero(dk + r);
            x.tail(r) = random_in_ball(rng, r, radius);
            Vec fs = nf.f_sing(x);
            c.observe(fs.size() ? fs.norm() : 0.0, x);
        }
    }
    {
        InvariantCheck& c = rep.add("f_sing_derivative_at_origin", 1e-6);
        const double h = 1e-4;
        Vec zero = Vec::Zero(dk + r);
        Mat d = Mat::Zero(nf.coker_dim(), dk + r);
        for (Eigen::Index i = 0; i < dk + r && nf.coker_dim() > 0; ++i)
        {
            Vec e = Vec::Zero(dk + r);
            e(i) = 1.0;
            d.col(i) = directional([&](const Vec& x) { return nf.f_sing(x); }, zero, e, h);
        }
        c.observe(d.size() ? d.norm() : 0.0, zero);
    }
    {
        InvariantCheck& c = rep.add("chart_identity", 1e-6);
        for (int s = 0; s < samples; ++s)
        {
            Vec x = random_in_ball(rng, dk + r, radius);
            Vec u = nf.embed(nf.psi_inverse_or_throw(x));
            Vec lhs = nf.phi_inverse(nf.target_coords(nf.shifted(u)));
            c.observe((lhs - nf.normal_form(x)).norm(), x);
        }
    }
    {
        InvariantCheck& c = rep.add("psi_roundtrip", 1e-8);
        for (int s = 0; s < samples; ++s)
        {
            Vec x = random_in_ball(rng, dk + r, radius);
            c.observe((nf.psi(nf.psi_inverse_or_throw(x)) - x).norm(), x);
        }
    }
    {
        // Zero set: on x2 = 0 the displacement f~ lies in coker and equals Q f_sing(x1, 0).
        InvariantCheck& c = rep.add("zero_set", 1e-8);
        for (int s = 0; s < samples; ++s)
        {
            Vec x = Vec::Zero(dk + r);
            x.head(dk) = random_in_ball(rng, dk, radius);
            Vec fx = nf.shifted(nf.embed(nf.psi_inverse_or_throw(x)));
            Vec model = nf.coker_dim() ? Vec(nf.splitting().coker * nf.f_sing(x)) : Vec::Zero(fx.size());
            c.observe((fx - model).norm(), x);
        }
    }
    rep.add("phi_coker_identity", 1e-8).observe(deform_target_check(nf, rng), Vec::Zero(nf.coker_dim() + r));
    return out;
}

// ---------------------------------------------------------------------------
// Demo models

std::vector<std::string> demo_model_names()
{
    return {"submersion", "parabola", "fold", "mixed", "cubic", "identity", "momentum"};
}

SmoothMap demo_model(const std::string& name)
{
    SmoothMap m;
    if (name == "submersion")
    {
        m.domain_dim = 3;
        m.target_dim = 2;
        m.f = [](const Vec& x) { return Vec((Vec(2) << x(0) + x(1) * x(1), x(1) + x(2) * x(2) + x(0) * x(2)).finished()); };
        m.jacobian = [](const Vec& x) {
            return Mat((Mat(2, 3) << 1.0, 2.0 * x(1), 0.0, x(2), 1.0, 2.0 * x(2) + x(0)).finished());
        };
    }
    else if (name == "parabola")
    {
        m.domain_dim = 2;
        m.target_dim = 1;
        m.f = [](const Vec& x) { return Vec((Vec(1) << x(1) + x(0) * x(0)).finished()); };
        m.jacobian = [](const Vec& x) { return Mat((Mat(1, 2) << 2.0 * x(0), 1.0).finished()); };
    }
    else if (name == "fold")
    {
        m.domain_dim = 2;
        m.target_dim = 2;
        m.f = [](const Vec& x) { return Vec((Vec(2) << x(1), x(0) * x(0)).finished()); };
        m.jacobian = [](const Vec& x) { return Mat((Mat(2, 2) << 0.0, 1.0, 2.0 * x(0), 0.0).finished()); };
    }
    else if (name == "mixed")
    {
        m.domain_dim = 2;
        m.target_dim = 2;
        m.f = [](const Vec& x) { return Vec((Vec(2) << x(1), x(0) * x(0) - x(1) * x(0)).finished()); };
        m.jacobian = [](const Vec& x) {
            return Mat((Mat(2, 2) << 0.0, 1.0, 2.0 * x(0) - x(1), -x(0)).finished());
        };
    }
    else if (name == "cubic")
    {
        m.domain_dim = 1;
        m.target_dim = 2;
        m.f = [](const Vec& x) { return Vec((Vec(2) << x(0), x(0) * x(0) * x(0)).finished()); };
        m.jacobian = [](const Vec& x) { return Mat((Mat(2, 1) << 1.0, 3.0 * x(0) * x(0)).finished()); };
    }
    else if (name == "identity")
    {
        m.domain_dim = 2;
        m.target_dim = 2;
        m.f = [](const Vec& x) { return x; };
        m.jacobian = [](const Vec&) { return Mat(Mat::Identity(2, 2)); };
    }
    else if (name == "momentum")
    {
        // Circle action with weights (1, -1) on C^2 near a free point of the zero level.
        auto action = std::make_shared<LieAlgebraAction>(make_complex_model(2), torus_generators((IMat(1, 2) << 1, -1).finished()));
        m.domain_dim = 4;
        m.target_dim = 1;
        m.f = [action](const Vec& x) { return momentum(*action, x); };
        m.jacobian = [action](const Vec& x) { return momentum_jacobian(*action, x); };
        m.base_point = (Vec(4) << 1.0, 0.0, 1.0, 0.0).finished() / std::sqrt(2.0);
        return m;
    }
    else
    {
        throw InputError("unknown normal form model: " + name);
    }
    m.base_point = Vec::Zero(m.domain_dim);
    return m;
}

// ---------------------------------------------------------------------------
// MGS assembly

MGSData assemble_mgs(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& m, Rng& rng, int samples)
{
    SmoothMap jm;
    jm.domain_dim = action.space_dim();
    jm.target_dim = action.dim();
    jm.f = [&action](const Vec& x) { return momentum(action, x); };
    jm.jacobian = [&action](const Vec& x) { return momentum_jacobian(action, x); };
    jm.base_point = m;
    return assemble_mgs(action, rep, jm, m, rng, samples);
}

MGSData assemble_mgs(const LieAlgebraAction& action, const CompactGroupRep& rep, const SmoothMap& j_map,
                     const Vec& m, Rng& rng, int samples)
{
    const Eigen::Index n = action.space_dim();
    const Eigen::Index k = action.dim();
    if (rep.space_dim() != n || m.size() != n || j_map.domain_dim != n || j_map.target_dim != k)
        throw InputError("assemble_mgs: dimension mismatch between action, rep, map and point");

    MGSData out;
    out.base_point = m;
    out.mu = j_map(m);

    const Mat g_mu = coadjoint_stabilizer(action, out.mu);

    const Mat gmet = invariant_metric(rep, action.space().metric());
    Mat orbit = Mat(n, 0);
    if (g_mu.cols() > 0)
        orbit = orth(action.orbit_matrix(m) * g_mu, 1e-10);
    Mat slice = metric_orthonormalize(metric_complement(orbit, gmet, 1e-10), gmet);
    out.slice_basis = slice;
    const Eigen::Index s = slice.cols();

    // f(x) = J(m + B_S x) - mu on the slice.
    SmoothMap f;
    f.domain_dim = s;
    f.target_dim = k;
    const Vec mu = out.mu;
    SmoothMap jcopy = j_map;
    f.f = [jcopy, m, slice, mu](const Vec& x) { return Vec(jcopy(m + slice * x) - mu); };
    f.jacobian = [jcopy, m, slice](const Vec& x) { return Mat(jcopy.jacobian_at(m + slice * x) * slice); };
    f.base_point = Vec::Zero(s);

    StabilizerDescriptor stab = stabilizer(rep, m);
    out.h_basis = stab.algebra_basis;
    std::vector<Mat> domain_group, target_group;
    for (const Mat& h : stabilizer_elements(rep, stab, 12))
    {
        domain_group.push_back(slice.transpose() * gmet * h * slice);
        if (k > 0)
            target_group.push_back(coadjoint_matrix(action, h));
    }
    Mat t = f.jacobian_at(f.base_point);
    double smax = t.size() ? Eigen::JacobiSVD<Mat>(t).singularValues()(0) : 0.0;
    LinearSplitting split = equivariant_split_jacobian(t, 1e-8 * (1.0 + smax), domain_group, target_group);

    auto nf = deform_domain(f, split);
    out.normal_form = nf;
    const Eigen::Index dk = nf->ker_dim();
    out.ker_dim = dk;
    out.radius = 0.5 * nf->validity_radius();

    const Mat omega = action.space().omega();
    auto chart_point = [nf, m, slice, dk](const Vec& x1) {
        Vec y = Vec::Zero(nf->chart_dim());
        y.head(dk) = x1;
        return Vec(m + slice * nf->embed(nf->psi_inverse_or_throw(y)));
    };
    out.chart = chart_point;
    out.omega_bar = [nf, slice, omega, dk](const Vec& x1) {
        Mat emb(slice.rows(), nf->chart_dim());
        emb << nf->splitting().ker, nf->splitting().coimg;
        Mat tangent = slice * emb * nf->kernel_graph_derivative(x1);
        Mat w = tangent.transpose() * omega * tangent;
        (void)dk;
        return Mat(0.5 * (w - w.transpose()));
    };
    const Mat hb = out.h_basis;
    out.j_sing = [nf, hb, dk](const Vec& x1) {
        Vec y = Vec::Zero(nf->chart_dim());
        y.head(dk) = x1;
        Vec target = nf->coker_dim() ? Vec(nf->splitting().coker * nf->f_sing(y))
                                     : Vec::Zero(nf->map().target_dim);
        return Vec(hb.transpose() * target);
    };
    const Mat& kbasis = nf->splitting().ker;
    for (Eigen::Index b = 0; b < hb.cols(); ++b)
    {
        Mat as = slice.transpose() * gmet * action.generator(hb.col(b)) * slice;
        out.h_action.push_back(kbasis.transpose() * as * kbasis);
    }

    out.report = verify_mgs(out, rng, samples);

    // Bifurcation-type consistency of the assembled data.
    {
        Mat coker_ambient = nf->splitting().coker;
        double dist = projector_distance(coker_ambient, hb);
        out.report.add("coker_equals_stabilizer_algebra", 1e-8).observe(dist, m);
    }
    {
        Mat e = span_intersection(slice, null_space(j_map.jacobian_at(m), n, 1e-10), 1e-10);
        Mat ker_ambient = slice * kbasis;
        out.report.add("ker_equals_symplectic_normal_space", 1e-8).observe(projector_distance(ker_ambient, e), m);
    }
    out.strong = out.report.has("quadratic_identity") && out.report.get("quadratic_identity").pass();
    if (split.ill_separated)
        out.report.notes.push_back("ill-separated rank at the base point");
    if (hb.cols() == 0)
        out.report.notes.push_back("stabilizer algebra is trivial: the momentum identity is vacuous (n_xi = 0)");
    return out;
}

namespace {

double max_abs(const Mat& m)
{
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

double quadratic_identity_residual(const MGSData& mgs, Rng& rng, int samples)
{
    if (mgs.h_action.empty())
        return 0.0;
    const Mat w0 = mgs.omega_bar(Vec::Zero(mgs.ker_dim));
    double worst = 0.0;
    for (int s = 0; s < samples; ++s)
    {
        Vec x = random_in_ball(rng, mgs.ker_dim, mgs.radius);
        Vec js = mgs.j_sing(x);
        for (std::size_t b = 0; b < mgs.h_action.size(); ++b)
        {
            double rhs = 0.5 * x.dot(w0 * (mgs.h_action[b] * x));
            worst = std::max(worst, std::abs(js(static_cast<Eigen::Index>(b)) - rhs));
        }
    }
    return worst;
}

VerificationReport verify_mgs(const MGSData& mgs, Rng& rng, int samples)
{
    VerificationReport rep;
    const Eigen::Index d = mgs.ker_dim;
    const Vec zero = Vec::Zero(d);
    const Mat w0 = mgs.omega_bar(zero);

    rep.add("omega_bar0_antisymmetric", 1e-10).observe(max_abs(w0 + w0.transpose()), zero);
    {
        double smin = d ? min_singular_value(w0) : 1.0;
        rep.add("omega_bar0_nondegenerate", 1e8).observe(smin > 0.0 ? 1.0 / smin : INFINITY, zero);
    }
    {
        const double h = 1e-5;
        InvariantCheck& c = rep.add("momentum_identity", 1e-6);
        for (int s = 0; s < samples; ++s)
        {
            Vec x = random_in_ball(rng, d, mgs.radius);
            Vec w = random_unit(rng, d);
            if (mgs.h_action.empty())
            {
                c.observe(0.0, x);
                continue;
            }
            Mat wx = mgs.omega_bar(x);
            Vec djs = directional(mgs.j_sing, x, w, h);
            double worst = 0.0;
            for (std::size_t b = 0; b < mgs.h_action.size(); ++b)
            {
                Vec xi_x = mgs.h_action[b] * x;
                worst = std::max(worst, std::abs(xi_x.dot(wx * w) + djs(static_cast<Eigen::Index>(b))));
            }
            c.observe(worst, x);
        }
    }
    double variation = 0.0;
    for (int s = 0; s < 16; ++s)
    {
        Vec x = random_in_ball(rng, d, mgs.radius);
        variation = std::max(variation, max_abs(mgs.omega_bar(x) - w0));
    }
    double quad = quadratic_identity_residual(mgs, rng, samples);
    rep.notes.push_back("omega_bar_variation=" + std::to_string(variation));
    rep.notes.push_back("n_xi=" + std::to_string(mgs.h_action.size()));
    if (variation <= 1e-10)
        rep.add("quadratic_identity", 1e-8).observe(quad, zero);
    return rep;
}

MGSData strong_upgrade(const MGSData& mgs, Rng& rng, int samples)
{
    const Eigen::Index d = mgs.ker_dim;
    if (d > 8)
        throw InputError("strong_upgrade: Moser path limited to dim ker <= 8");
    const Vec zero = Vec::Zero(d);
    const Mat w0 = mgs.omega_bar(zero);

    double variation = 0.0;
    for (int s = 0; s < samples; ++s)
    {
        Vec x = random_in_ball(rng, d, mgs.radius);
        Mat wx = mgs.omega_bar(x);
        // omega_t = omega_0 ((1 - t) I + t M) is singular for some t in [0, 1]
        // iff M = omega_0^{-1} omega_x has a real eigenvalue <= 0.
        if (d > 0)
        {
            Eigen::EigenSolver<Mat> es(w0.fullPivLu().solve(wx));
            for (Eigen::Index i = 0; i < d; ++i)
                if (std::abs(es.eigenvalues()(i).imag()) <= 1e-12 && es.eigenvalues()(i).real() <= 1e-8)
                    throw NumericalError(
                        "strong_upgrade refused: omega_bar degenerates along the Moser path (outside the Darboux patch)");
        }
        variation = std::max(variation, max_abs(wx - w0));
    }

    if (variation <= 1e-10)
    {
        MGSData out = mgs;
        double quad = quadratic_identity_residual(out, rng, samples);
        out.strong = quad <= 1e-8;
        if (!out.report.has("quadratic_identity"))
            out.report.add("quadratic_identity", 1e-8).observe(quad, zero);
        if (!out.strong)
            out.report.notes.push_back("constant form but quadratic identity fails");
        return out;
    }

    // Gauss-Legendre nodes on [0, 1].
    static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                                   0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                                   0.1246289712553786, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    auto omega_bar = mgs.omega_bar;
    auto sigma = [omega_bar, w0](const Vec& x) {
        Vec acc = Vec::Zero(x.size());
        for (int i = 0; i < 16; ++i)
        {
            double node = i < 8 ? 0.5 * (1.0 - gl_x[7 - i]) : 0.5 * (1.0 + gl_x[i - 8]);
            double weight = 0.5 * (i < 8 ? gl_w[7 - i] : gl_w[i - 8]);
            Mat diff = omega_bar(node * x) - w0;
            acc += weight * node * (diff.transpose() * x);
        }
        return acc;
    };
    auto flow = [omega_bar, w0, sigma](const Vec& x0) {
        const double dt = 1e-3;
        const int steps = 1000;
        Vec x = x0;
        auto field = [&](double t, const Vec& y) -> Vec {
            Mat wt = w0 + t * (omega_bar(y) - w0);
            return wt.fullPivLu().solve(sigma(y));
        };
        for (int s = 0; s < steps; ++s)
        {
            double t = s * dt;
            Vec k1 = field(t, x);
            Vec k2 = field(t + 0.5 * dt, x + 0.5 * dt * k1);
            Vec k3 = field(t + 0.5 * dt, x + 0.5 * dt * k2);
            Vec k4 = field(t + dt, x + dt * k3);
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return x;
    };

    MGSData out = mgs;
    out.omega_bar = [w0](const Vec&) { return w0; };
    auto js = mgs.j_sing;
    out.j_sing = [js, flow](const Vec& x) { return js(flow(x)); };
    if (mgs.chart)
    {
        auto chart = mgs.chart;
        out.chart = [chart, flow](const Vec& x) { return chart(flow(x)); };
    }
    out.report = VerificationReport();
    out.report.notes.push_back("moser_upgrade: dt=1e-3, 16-point Gauss-Legendre primitive");

    {
        InvariantCheck& c = out.report.add("pullback_constant", 1e-6);
        const double h = 1e-5;
        for (int s = 0; s < samples; ++s)
        {
            Vec x = random_in_ball(rng, d, mgs.radius);
            Mat dphi(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
            {
                Vec e = Vec::Zero(d);
                e(i) = 1.0;
                dphi.col(i) = directional(flow, x, e, h);
            }
            Mat pulled = dphi.transpose() * omega_bar(flow(x)) * dphi;
            c.observe(max_abs(pulled - w0), x);
        }
    }
    double quad = quadratic_identity_residual(out, rng, samples);
    out.report.add("quadratic_identity", 1e-6).observe(quad, zero);
    VerificationReport v = verify_mgs(out, rng, samples);
    for (const auto& c : v.checks)
        if (c.name != "quadratic_identity")
            out.report.checks.push_back(c);
    out.strong = out.report.pass();
    return out;
}

// ---------------------------------------------------------------------------
// Approximation property

bool ApproximationReport::consistent() const
{
    for (const auto& t : types)
        if (t.status == "ray_failed")
            return false;
    return true;
}

ApproximationReport approximation_property_check(const MGSData& mgs, const CompactGroupRep& rep,
                                                 const std::vector<std::string>& orbit_types, Rng& rng, int budget)
{
    ApproximationReport out;
    const Eigen::Index d = mgs.ker_dim;
    if (!mgs.chart)
    {
        for (const auto& t : orbit_types)
            out.types.push_back({t, "inconclusive", {}, 0.0});
        return out;
    }

    auto jac = [&](const Vec& x) {
        Eigen::Index h = static_cast<Eigen::Index>(mgs.h_action.size());
        return finite_difference_jacobian(mgs.j_sing, x, h);
    };
    std::vector<std::pair<std::string, Vec>> found;
    found.emplace_back(stabilizer(rep, mgs.chart(Vec::Zero(d))).orbit_type, Vec::Zero(d));
    for (int s = 0; s < budget; ++s)
    {
        Vec x = random_in_ball(rng, d, mgs.radius);
        bool ok = true;
        for (int it = 0; it < 50 && !mgs.h_action.empty(); ++it)
        {
            Vec r = mgs.j_sing(x);
            if (r.norm() <= 1e-12)
                break;
            Mat dj = jac(x);
            if (min_singular_value(dj.transpose()) <= 1e-6 * std::max(1.0, x.norm()))
            {
                ok = false;  // near-singular Jacobian: the level is being approached at a singular point
                break;
            }
            x -= pinv(dj) * r;
        }
        // Iterates that collapse toward the base point are the origin in disguise.
        if (!ok || (!mgs.h_action.empty() && mgs.j_sing(x).norm() > 1e-10) || x.norm() > 2.0 * mgs.radius ||
            x.norm() < 1e-3 * mgs.radius)
            continue;
        found.emplace_back(stabilizer(rep, mgs.chart(x)).orbit_type, x);
    }

    std::vector<std::string> wanted = orbit_types;
    if (wanted.empty())
        for (const auto& f : found)
            if (std::find(wanted.begin(), wanted.end(), f.first) == wanted.end())
                wanted.push_back(f.first);
    std::sort(wanted.begin(), wanted.end());

    for (const auto& type : wanted)
    {
        ApproximationTypeResult res{type, "inconclusive", {}, 0.0};
        for (const auto& f : found)
            if (f.first == type && res.witnesses.size() < 8)
                res.witnesses.push_back(f.second);
        if (!res.witnesses.empty())
        {
            res.status = "found";
            for (const Vec& x : res.witnesses)
            {
                if (x.norm() == 0.0)
                    continue;
                for (int j = 0; j <= 10; ++j)
                {
                    double alpha = std::ldexp(1.0, -j);
                    Vec ax = alpha * x;
                    double r = mgs.h_action.empty() ? 0.0 : mgs.j_sing(ax).norm();
                    res.max_ray_residual = std::max(res.max_ray_residual, r);
                    if (r > 1e-8 || stabilizer(rep, mgs.chart(ax)).orbit_type != type)
                        res.status = "ray_failed";
                }
            }
        }
        out.types.push_back(res);
    }
    return out;
}

}  // namespace momenta
