#include "momenta/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include "momenta/symplin.hpp"

namespace momenta {

namespace {

constexpr double kSubspaceEps = 1e-10;

Mat omega_orthogonal(const Mat& omega, const Mat& basis)
{
    const Eigen::Index n = omega.rows();
    if (basis.cols() == 0)
        return Mat::Identity(n, n);
    return null_space(basis.transpose() * omega, n, kSubspaceEps);
}

Mat orbit_span(const LieAlgebraAction& action, const Vec& m, const Mat& algebra)
{
    if (algebra.cols() == 0 || action.dim() == 0)
        return Mat(m.size(), 0);
    return orth(action.orbit_matrix(m) * algebra, kSubspaceEps);
}

Mat stacked(const std::vector<const Mat*>& blocks, Eigen::Index n)
{
    Eigen::Index cols = 0;
    for (const Mat* b : blocks)
        cols += b->cols();
    Mat out(n, cols);
    Eigen::Index c = 0;
    for (const Mat* b : blocks)
    {
        if (b->cols() > 0)
            out.middleCols(c, b->cols()) = *b;
        c += b->cols();
    }
    return out;
}

bool is_zero_level(const Vec& mu) { return mu.size() == 0 || mu.norm() <= 1e-12; }

/// Orthonormal basis of E^{G_m} at m.
Mat reduced_space(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& m,
                  const WittArtinDecomposition& wa, StabilizerDescriptor* stab_out = nullptr)
{
    StabilizerDescriptor stab = stabilizer(rep, m);
    Mat fixed = stabilizer_fixed_subspace(rep, stab);
    if (stab_out)
        *stab_out = stab;
    (void)action;
    if (wa.e.cols() == 0 || fixed.cols() == 0)
        return Mat(m.size(), 0);
    return span_intersection(wa.e, fixed, kSubspaceEps);
}

}  // namespace

double BifurcationResult::max_distance() const
{
    return std::max({ker_is_orbit_orthogonal, image_annihilator, ker_orthogonal_is_orbit, ker_radical});
}

BifurcationResult bifurcation_check(const LieAlgebraAction& action, const Vec& m)
{
    const Eigen::Index n = action.space_dim();
    const Eigen::Index k = action.dim();
    const Mat& omega = action.space().omega();
    BifurcationResult r;

    Mat dj = momentum_jacobian(action, m);
    Mat ker = k > 0 ? null_space(dj, n, kSubspaceEps) : Mat(Mat::Identity(n, n));
    Mat orbit = orbit_span(action, m, Mat::Identity(k, k));
    r.ker_is_orbit_orthogonal = projector_distance(ker, omega_orthogonal(omega, orbit));

    if (k > 0)
    {
        Mat image_perp = null_space(dj.transpose(), k, kSubspaceEps);
        Mat g_m = null_space(action.orbit_matrix(m), k, kSubspaceEps);
        r.image_annihilator = projector_distance(image_perp, g_m);
    }

    Mat ker_omega = omega_orthogonal(omega, ker);
    r.ker_orthogonal_is_orbit = projector_distance(ker_omega, orbit);

    Mat radical = span_intersection(ker, ker_omega, kSubspaceEps);
    Mat gmu_m = orbit_span(action, m, coadjoint_stabilizer(action, momentum(action, m)));
    r.ker_radical = projector_distance(radical, gmu_m);
    return r;
}

WittArtinDecomposition witt_artin(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& m)
{
    const Eigen::Index n = action.space_dim();
    const Eigen::Index k = action.dim();
    const Mat& omega = action.space().omega();
    WittArtinDecomposition wa;

    const Vec mu = momentum(action, m);
    Mat g_mu = coadjoint_stabilizer(action, mu);
    // The coordinate inner product on g is Ad-invariant for the supported bases.
    Mat q = k > 0 ? null_space(g_mu.transpose(), k, kSubspaceEps) : Mat(0, 0);
    wa.gmu_m = orbit_span(action, m, g_mu);
    wa.q_m = orbit_span(action, m, q);
    wa.stabilizer_dim = k > 0 ? k - numerical_rank(action.orbit_matrix(m), kSubspaceEps) : 0;

    const Mat gmet = invariant_metric(rep, action.space().metric());
    Mat slice = metric_complement(wa.gmu_m, gmet, kSubspaceEps);
    Mat ker = k > 0 ? null_space(momentum_jacobian(action, m), n, kSubspaceEps) : Mat(Mat::Identity(n, n));
    wa.e = span_intersection(slice, ker, kSubspaceEps);
    if (wa.e.cols() == 0)
        wa.e = Mat(n, 0);

    Mat three = stacked({&wa.q_m, &wa.gmu_m, &wa.e}, n);
    wa.f = three.cols() > 0 ? metric_complement(three, gmet, kSubspaceEps) : Mat(Mat::Identity(n, n));
    if (wa.f.cols() > 0)
        wa.f = orth(wa.f, kSubspaceEps);

    Mat all = stacked({&wa.q_m, &wa.gmu_m, &wa.e, &wa.f}, n);
    Mat span = all.cols() > 0 ? orth(all, kSubspaceEps) : Mat(n, 0);
    wa.direct_sum_residual = static_cast<double>(std::abs(all.cols() - n)) +
                             projector_distance(span, Mat(Mat::Identity(n, n)));

    Mat ge = span_sum(wa.gmu_m, wa.e, kSubspaceEps);
    wa.ker_residual = projector_distance(ge, ker) +
                      static_cast<double>(std::abs(wa.gmu_m.cols() + wa.e.cols() - ker.cols()));

    if (wa.e.cols() > 0)
        wa.e_form_min_singular = min_singular_value(wa.e.transpose() * omega * wa.e);
    else
        wa.e_form_min_singular = std::numeric_limits<double>::infinity();
    wa.parity_even = (2 * wa.stabilizer_dim - wa.e.cols()) % 2 == 0;
    return wa;
}

LevelProjection project_to_level(const LieAlgebraAction& action, const Vec& x0, const Vec& mu, double tol)
{
    const Eigen::Index k = action.dim();
    if (mu.size() != k || x0.size() != action.space_dim())
        throw InputError("project_to_level: dimension mismatch");
    LevelProjection out;
    out.x = x0;
    if (k == 0)
    {
        out.converged = true;
        return out;
    }
    const double scale = std::max(1.0, x0.norm());
    for (int it = 0; it <= 50; ++it)
    {
        Vec r = momentum(action, out.x) - mu;
        out.residual = r.norm();
        out.iterations = it;
        if (out.residual <= tol)
        {
            out.converged = true;
            break;
        }
        if (it == 50 || !out.x.allFinite())
            break;
        Mat dj = momentum_jacobian(action, out.x);
        out.x -= pinv(dj, 1e-12) * r;
    }
    if (out.x.allFinite())
    {
        Mat dj = momentum_jacobian(action, out.x);
        Eigen::JacobiSVD<Mat> svd(dj);
        const Vec& sv = svd.singularValues();
        // The rank expected at a regular point is the rank at x0.
        Eigen::Index r0 = numerical_rank(momentum_jacobian(action, x0), 1e-8);
        if (r0 > 0 && (sv.size() < r0 || sv(r0 - 1) <= 1e-4 * scale))
            out.near_singular = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strata

namespace {

struct TypeBucket
{
    std::vector<Vec> witnesses;
};

/// J(e_{2j}) for each coordinate pair: J(z) = sum_j |z_j|^2 a_j on a torus.
Mat torus_pair_momenta(const LieAlgebraAction& action, Eigen::Index pairs)
{
    Mat a(action.dim(), pairs);
    for (Eigen::Index j = 0; j < pairs; ++j)
        a.col(j) = momentum(action, Vec::Unit(2 * pairs, 2 * j));
    return a;
}

/// Points with all coordinates positive in {y >= 0 : N y = 0}, one per coordinate,
/// or empty if some coordinate is forced to vanish.
std::vector<Vec> cone_interior_generators(const Mat& nmat)
{
    const Eigen::Index c = nmat.cols();
    std::vector<Vec> gens;
    const double tol = 1e-9 * (1.0 + nmat.norm());
    for (Eigen::Index i = 0; i < c; ++i)
    {
        Mat rest(nmat.rows(), c - 1);
        Eigen::Index col = 0;
        for (Eigen::Index j = 0; j < c; ++j)
            if (j != i)
                rest.col(col++) = nmat.col(j);
        Vec y = Vec::Zero(c);
        y(i) = 1.0;
        if (nmat.rows() > 0 && c > 1)
        {
            Vec sol = nnls(rest, -nmat.col(i));
            if ((rest * sol + nmat.col(i)).norm() > tol)
                return {};
            col = 0;
            for (Eigen::Index j = 0; j < c; ++j)
                if (j != i)
                    y(j) = sol(col++);
        }
        else if (nmat.rows() > 0 && nmat.col(i).norm() > tol)
        {
            return {};
        }
        gens.push_back(y);
    }
    return gens;
}

void enumerate_torus(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& mu, Rng& rng,
                     std::map<std::string, TypeBucket>& buckets, std::vector<std::string>& notes)
{
    const Eigen::Index pairs = rep.torus().weights.cols();
    const Eigen::Index n = 2 * pairs;
    const bool zero = is_zero_level(mu);
    Mat a = torus_pair_momenta(action, pairs);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (long long mask = 0; mask < (1LL << pairs); ++mask)
    {
        std::vector<Eigen::Index> support;
        for (Eigen::Index j = 0; j < pairs; ++j)
            if (mask & (1LL << j))
                support.push_back(j);
        const Eigen::Index s = static_cast<Eigen::Index>(support.size());
        if (s == 0)
        {
            if (zero)
                buckets[stabilizer(rep, Vec::Zero(n)).orbit_type].witnesses.push_back(Vec::Zero(n));
            continue;
        }
        // Homogenized cone {(c, t) >= 0 : A_S c - mu t = 0}; t is dropped at mu = 0.
        Mat nmat(action.dim(), s + (zero ? 0 : 1));
        for (Eigen::Index i = 0; i < s; ++i)
            nmat.col(i) = a.col(support[static_cast<std::size_t>(i)]);
        if (!zero)
            nmat.col(s) = -mu;
        std::vector<Vec> gens = cone_interior_generators(nmat);
        if (gens.empty())
            continue;
        int made = 0;
        for (int attempt = 0; attempt < 40 && made < 8; ++attempt)
        {
            Vec y = Vec::Zero(nmat.cols());
            for (const Vec& g : gens)
                y += (0.5 + unit(rng)) * g;
            Vec c = y.head(s);
            if (zero)
                c *= (0.25 + unit(rng)) / c.sum();
            else
                c /= y(s);
            Vec x = Vec::Zero(n);
            for (Eigen::Index i = 0; i < s; ++i)
            {
                const Eigen::Index j = support[static_cast<std::size_t>(i)];
                double theta = 2.0 * std::numbers::pi * unit(rng);
                double r = std::sqrt(std::max(c(i), 0.0));
                x(2 * j) = r * std::cos(theta);
                x(2 * j + 1) = r * std::sin(theta);
            }
            LevelProjection p = project_to_level(action, x, mu, 1e-13);
            if (!p.converged)
                continue;
            StabilizerDescriptor st = stabilizer(rep, p.x);
            if (st.support.size() != support.size())
                continue;  // a coordinate collapsed numerically
            buckets[st.orbit_type].witnesses.push_back(p.x);
            ++made;
        }
        if (made == 0)
            notes.push_back("support mask " + std::to_string(mask) + " feasible but no witness was produced");
    }
}

void sample_strata(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& mu, Rng& rng,
                   int budget, std::map<std::string, TypeBucket>& buckets)
{
    const Eigen::Index n = action.space_dim();
    const bool zero = is_zero_level(mu);
    if (zero)
        buckets[stabilizer(rep, Vec::Zero(n)).orbit_type].witnesses.push_back(Vec::Zero(n));

    // Candidate subspaces: the whole space and fixed subspaces of single elements.
    std::vector<Mat> subspaces{Mat::Identity(n, n)};
    if (rep.is_finite())
        for (const Mat& g : rep.finite().elements())
        {
            Mat fix = null_space(g - Mat::Identity(n, n), n, kSubspaceEps);
            if (fix.cols() > 0 && fix.cols() < n)
                subspaces.push_back(fix);
        }
    for (int s = 0; s < budget; ++s)
    {
        const Mat& sub = subspaces[static_cast<std::size_t>(s) % subspaces.size()];
        Vec x = sub * random_normal(rng, sub.cols());
        LevelProjection p = project_to_level(action, x, mu, 1e-12);
        if (!p.converged || p.near_singular || p.x.norm() < 1e-6)
            continue;
        auto& b = buckets[stabilizer(rep, p.x).orbit_type];
        if (b.witnesses.size() < 16)
            b.witnesses.push_back(p.x);
    }
}

void analyze_stratum(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& mu,
                     StratumReport& st)
{
    const Mat& omega = action.space().omega();
    const Vec& m = st.witnesses.front();
    WittArtinDecomposition wa = witt_artin(action, rep, m);
    st.reduced_basis = reduced_space(action, rep, m, wa, &st.stabilizer);
    st.reduced_dim = st.reduced_basis.cols();
    st.ambient_dim = wa.gmu_m.cols() + st.reduced_dim;
    st.reduced_form = st.reduced_basis.transpose() * omega * st.reduced_basis;
    st.reduced_form_min_singular =
        st.reduced_dim > 0 ? min_singular_value(st.reduced_form) : std::numeric_limits<double>::infinity();

    VerificationReport& rep_out = st.report;
    {
        auto& c = rep_out.add("witnesses_on_level", 1e-10);
        for (const Vec& w : st.witnesses)
            c.observe(action.dim() > 0 ? (momentum(action, w) - mu).norm() : 0.0, w);
    }
    {
        auto& c = rep_out.add("witnesses_share_orbit_type", 0.0);
        for (const Vec& w : st.witnesses)
            c.observe(stabilizer(rep, w).orbit_type == st.orbit_type_id ? 0.0 : 1.0, w);
    }
    {
        auto& c = rep_out.add("reduced_dim_constant", 0.0);
        for (const Vec& w : st.witnesses)
        {
            WittArtinDecomposition ww = witt_artin(action, rep, w);
            c.observe(std::abs(static_cast<double>(reduced_space(action, rep, w, ww).cols() - st.reduced_dim)), w);
        }
    }
    rep_out.add("reduced_form_antisymmetric", 1e-12)
        .observe(st.reduced_dim > 0 ? (st.reduced_form + st.reduced_form.transpose()).norm() : 0.0, m);
    rep_out.add("reduced_form_nondegenerate", 1e8)
        .observe(st.reduced_dim > 0 ? 1.0 / st.reduced_form_min_singular : 0.0, m);
    rep_out.add("reduced_dim_even", 0.0).observe(static_cast<double>(st.reduced_dim % 2), m);
    rep_out.add("witt_artin_direct_sum", 1e-8).observe(wa.direct_sum_residual, m);
    rep_out.add("witt_artin_ker", 1e-8).observe(wa.ker_residual, m);
    rep_out.add("witt_artin_parity", 0.0).observe(wa.parity_even ? 0.0 : 1.0, m);
    if (rep.is_abelian())
    {
        // Local model: the stratum through m has tangent space g_mu.m + E^{G_m}.
        const Eigen::Index n = action.space_dim();
        Mat ker = action.dim() > 0 ? null_space(momentum_jacobian(action, m), n, kSubspaceEps)
                                   : Mat(Mat::Identity(n, n));
        Mat fixed = stabilizer_fixed_subspace(rep, st.stabilizer);
        Eigen::Index d = fixed.cols() > 0 ? span_intersection(ker, fixed, kSubspaceEps).cols() : 0;
        rep_out.add("local_model_dimension", 0.0)
            .observe(std::abs(static_cast<double>(d - st.ambient_dim)), m);
    }
    else
    {
        rep_out.notes.push_back("local model dimension cross-check applies to abelian groups only");
    }
    if (st.witnesses.size() < 8)
        rep_out.notes.push_back("fewer than 8 witnesses (" + std::to_string(st.witnesses.size()) + ")");
}

}  // namespace

StrataResult strata_of_level(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& mu, Rng& rng,
                             int sample_budget)
{
    if (mu.size() != action.dim())
        throw InputError("strata_of_level: mu has the wrong dimension");
    if (rep.space_dim() != action.space_dim())
        throw InputError("strata_of_level: rep and action act on different spaces");
    if (!is_zero_level(mu) && !rep.is_abelian())
        throw InputError("strata_of_level: nonzero levels are supported for abelian groups only");

    StrataResult out;
    out.mu = mu;
    std::map<std::string, TypeBucket> buckets;
    if (rep.is_torus() && rep.torus().weights.cols() <= 16)
    {
        enumerate_torus(action, rep, mu, rng, buckets, out.notes);
        out.exhaustive = true;
    }
    else
    {
        sample_strata(action, rep, mu, rng, sample_budget, buckets);
        out.notes.push_back("orbit types found by sampling; completeness is not guaranteed");
    }

    for (auto& [type, bucket] : buckets)
    {
        // Conic level: rescaled witnesses keep the orbit type.
        if (is_zero_level(mu) && bucket.witnesses.front().norm() > 0.0)
        {
            const std::size_t base = bucket.witnesses.size();
            for (std::size_t i = 0; bucket.witnesses.size() < 8 && i < 8; ++i)
                bucket.witnesses.push_back((0.5 + 0.25 * static_cast<double>(i)) * bucket.witnesses[i % base]);
        }
        StratumReport st;
        st.orbit_type_id = type;
        st.witnesses = bucket.witnesses;
        analyze_stratum(action, rep, mu, st);
        out.strata.push_back(std::move(st));
    }
    // std::map iteration already yields sorted orbit types.
    return out;
}

StrataResult strata_of_zero_level(const LieAlgebraAction& action, const CompactGroupRep& rep, Rng& rng,
                                  int sample_budget)
{
    return strata_of_level(action, rep, Vec::Zero(action.dim()), rng, sample_budget);
}

// ---------------------------------------------------------------------------
// Frontier

FrontierResult frontier_check(const LieAlgebraAction& action, const CompactGroupRep& rep, const StrataResult& strata,
                              Rng& rng)
{
    FrontierResult out;
    const bool zero = is_zero_level(strata.mu);
    const auto& ss = strata.strata;

    auto approached = [&](const Vec& a, const std::string& upper) {
        // a lies in the closure of `upper` if nearby level points of that type exist at every scale.
        for (double delta : {1e-1, 1e-2, 1e-3})
        {
            bool hit = false;
            const double d = delta * std::max(1.0, a.norm());
            for (int attempt = 0; attempt < 24 && !hit; ++attempt)
            {
                Vec x = a + d * random_unit(rng, a.size());
                LevelProjection p = project_to_level(action, x, strata.mu, 1e-12);
                if (!p.converged || (p.x - a).norm() > 10.0 * d)
                    continue;
                hit = stabilizer(rep, p.x).orbit_type == upper;
            }
            if (!hit)
                return false;
        }
        return true;
    };

    for (const auto& lo : ss)
        for (const auto& up : ss)
        {
            if (&lo == &up)
                continue;
            std::string method;
            bool related = false;
            bool origin_lower = zero && lo.witnesses.size() == 1 && lo.witnesses.front().norm() == 0.0;
            if (origin_lower)
            {
                // Rays t w, t -> 0, stay in the upper stratum and end at the origin.
                bool all = true;
                for (const Vec& w : up.witnesses)
                    for (int j = 1; j <= 20 && all; ++j)
                    {
                        Vec x = std::ldexp(1.0, -j) * w;
                        if (stabilizer(rep, x).orbit_type != up.orbit_type_id)
                            all = false;
                    }
                if (all && up.witnesses.front().norm() > 0.0)
                {
                    related = true;
                    method = "ray_scaling";
                }
            }
            if (!related)
            {
                std::size_t hits = 0, tried = 0;
                for (const Vec& a : lo.witnesses)
                {
                    if (tried == 4)
                        break;
                    ++tried;
                    if (approached(a, up.orbit_type_id))
                        ++hits;
                }
                if (hits == tried && tried > 0)
                {
                    related = true;
                    method = "nearest_point";
                }
                else if (hits > 0)
                {
                    out.inconclusive.push_back(lo.orbit_type_id + " vs " + up.orbit_type_id +
                                               ": some witnesses are approached, others are not");
                }
            }
            if (related)
            {
                out.order.push_back({lo.orbit_type_id, up.orbit_type_id, method});
                if (lo.ambient_dim >= up.ambient_dim)
                    out.violations.push_back("dimension does not drop from " + up.orbit_type_id + " to " +
                                             lo.orbit_type_id);
                for (const auto& back : out.order)
                    if (back.lower == up.orbit_type_id && back.upper == lo.orbit_type_id)
                        out.violations.push_back("mutual closure between " + lo.orbit_type_id + " and " +
                                                 up.orbit_type_id);
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Orbit distance and reduced dynamics

double orbit_distance(const CompactGroupRep& rep, const Vec& x, const Vec& y)
{
    if (rep.is_finite())
    {
        double best = INFINITY;
        for (const Mat& g : rep.finite().elements())
            best = std::min(best, (g * x - y).norm());
        return best;
    }
    if (rep.is_torus())
    {
        const IMat& w = rep.torus().weights;
        const Eigen::Index k = w.rows();
        if (k == 0)
            return (x - y).norm();
        auto dist = [&](const Vec& t) { return (torus_element(w, t) * x - y).norm(); };
        // Coarse grid, then coordinate-wise golden-section refinement.
        const int per = k == 1 ? 256 : (k == 2 ? 48 : 12);
        Vec best_t = Vec::Zero(k);
        double best = dist(best_t);
        long long total = 1;
        for (Eigen::Index i = 0; i < k; ++i)
            total *= per;
        for (long long idx = 0; idx < total && k <= 3; ++idx)
        {
            Vec t(k);
            long long r = idx;
            for (Eigen::Index i = 0; i < k; ++i)
            {
                t(i) = static_cast<double>(r % per) / per;
                r /= per;
            }
            double d = dist(t);
            if (d < best)
            {
                best = d;
                best_t = t;
            }
        }
        double h = 1.0 / per;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int sweep = 0; sweep < 4; ++sweep)
        {
            for (Eigen::Index i = 0; i < k; ++i)
            {
                double lo = best_t(i) - h, hi = best_t(i) + h;
                for (int it = 0; it < 60; ++it)
                {
                    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
                    Vec ta = best_t, tb = best_t;
                    ta(i) = a;
                    tb(i) = b;
                    if (dist(ta) < dist(tb))
                        hi = b;
                    else
                        lo = a;
                }
                Vec tm = best_t;
                tm(i) = 0.5 * (lo + hi);
                double d = dist(tm);
                if (d < best)
                {
                    best = d;
                    best_t = tm;
                }
            }
            h *= 0.25;
        }
        return best;
    }
    // Matrix groups: deterministic samples then random local descent.
    Rng rng(0x0d15);
    const auto& mg = rep.matrix_group();
    double best = INFINITY;
    Mat best_g;
    for (const Mat& g : rep.sample_elements(rng, 512))
    {
        double d = (g * x - y).norm();
        if (d < best)
        {
            best = d;
            best_g = g;
        }
    }
    const Eigen::Index k = mg.algebra.dim();
    double step = 0.3;
    for (int it = 0; it < 400 && k > 0; ++it)
    {
        Mat g = best_g * matrix_exp(mg.algebra.generator(step * random_normal(rng, k)));
        double d = (g * x - y).norm();
        if (d < best)
        {
            best = d;
            best_g = g;
        }
        else if (it % 20 == 19)
        {
            step *= 0.5;
        }
    }
    return best;
}

namespace {

/// Local section of the reduced space: e in E^{G_b} -> point of J^{-1}(mu) near b + B e,
/// corrected along the row space of DJ(b).
class ReducedChart
{
  public:
    ReducedChart(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& base, const Vec& mu)
        : action_(action), base_(base), mu_(mu)
    {
        WittArtinDecomposition wa = witt_artin(action, rep, base);
        basis_ = reduced_space(action, rep, base, wa);
        if (action.dim() > 0)
        {
            Mat dj = momentum_jacobian(action, base);
            normal_ = orth(dj.transpose(), 1e-10);
            image_ = orth(dj, 1e-10);
        }
    }

    Eigen::Index dim() const { return basis_.cols(); }
    const Vec& base() const { return base_; }

    /// Returns false if the correction does not converge.
    bool point(const Vec& e, Vec& out) const
    {
        Vec x = base_ + (basis_.cols() > 0 ? Vec(basis_ * e) : Vec::Zero(base_.size()));
        if (normal_.cols() == 0)
        {
            out = x;
            return true;
        }
        Vec lambda = Vec::Zero(normal_.cols());
        for (int it = 0; it < 40; ++it)
        {
            Vec p = x + normal_ * lambda;
            Vec r = image_.transpose() * (momentum(action_, p) - mu_);
            if (r.norm() <= 1e-15 * std::max(1.0, p.squaredNorm()))
            {
                out = p;
                return (momentum(action_, p) - mu_).norm() <= 1e-10;
            }
            Mat d = image_.transpose() * momentum_jacobian(action_, p) * normal_;
            lambda -= d.fullPivLu().solve(r);
        }
        out = x + normal_ * lambda;
        return (momentum(action_, out) - mu_).norm() <= 1e-10;
    }

    bool tangent(const Vec& e, Mat& out) const
    {
        const Eigen::Index d = dim();
        out.resize(base_.size(), d);
        const double h = 1e-6 * std::max(1.0, base_.norm());
        for (Eigen::Index i = 0; i < d; ++i)
        {
            Vec ep = e, em = e, xp, xm;
            ep(i) += h;
            em(i) -= h;
            if (!point(ep, xp) || !point(em, xm))
                return false;
            out.col(i) = (xp - xm) / (2.0 * h);
        }
        return true;
    }

  private:
    const LieAlgebraAction& action_;
    Vec base_;
    Vec mu_;
    Mat basis_;
    Mat normal_;
    Mat image_;
};

}  // namespace

DynamicsReport reduced_dynamics_check(const LieAlgebraAction& action, const CompactGroupRep& rep,
                                      const HamiltonianSystem& system, const StratumReport& stratum, double t_end,
                                      double dt)
{
    if (stratum.witnesses.empty())
        throw InputError("reduced_dynamics_check: stratum has no witness");
    if (t_end > 10.0)
        throw InputError("reduced_dynamics_check: comparison windows are limited to t_end <= 10");
    DynamicsReport out;
    const Vec m = stratum.witnesses.front();
    const Vec mu = momentum(action, m);
    const Mat& omega = action.space().omega();
    const int steps = static_cast<int>(std::llround(t_end / dt));
    const int every = std::max(1, static_cast<int>(std::llround(0.05 / dt)));

    FlowResult flow = hamiltonian_flow_noether(action, system, m, t_end, dt, every);
    out.noether_drift = flow.max_drift;
    if (flow.diverged)
        out.notes.push_back("ambient flow diverged");
    for (const Vec& x : flow.trajectory)
        if (stabilizer(rep, x).orbit_type != stratum.orbit_type_id)
            out.orbit_type_preserved = false;

    auto chart = std::make_unique<ReducedChart>(action, rep, m, mu);
    Vec e = Vec::Zero(chart->dim());
    auto field = [&](const Vec& ee, bool& ok) -> Vec {
        Vec x;
        Mat d;
        if (!chart->point(ee, x) || !chart->tangent(ee, d))
        {
            ok = false;
            return Vec::Zero(ee.size());
        }
        Mat wred = d.transpose() * omega * d;
        return wred.fullPivLu().solve(d.transpose() * gradient(system, x));
    };

    std::size_t record = 1;
    for (int s = 1; s <= steps && record < flow.trajectory.size(); ++s)
    {
        if (chart->dim() > 0)
        {
            bool ok = true;
            Vec k1 = field(e, ok);
            Vec k2 = field(e + 0.5 * dt * k1, ok);
            Vec k3 = field(e + 0.5 * dt * k2, ok);
            Vec k4 = field(e + dt * k3, ok);
            if (!ok)
            {
                out.shortened = true;
                out.notes.push_back("reduced chart failed at t = " + std::to_string((s - 1) * dt));
                break;
            }
            e += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            // Recenter once the chart coordinate is no longer small against the base point.
            if (e.norm() > 0.2 * std::max(1e-3, chart->base().norm()))
            {
                Vec nb;
                if (!chart->point(e, nb))
                {
                    out.shortened = true;
                    out.notes.push_back("chart exit at t = " + std::to_string(s * dt));
                    break;
                }
                chart = std::make_unique<ReducedChart>(action, rep, nb, mu);
                e = Vec::Zero(chart->dim());
                ++out.recenterings;
            }
        }
        if (s % every == 0 || s == steps)
        {
            Vec y;
            chart->point(e, y);
            out.max_mismatch = std::max(out.max_mismatch, orbit_distance(rep, flow.trajectory[record], y));
            out.compared_until = s * dt;
            ++record;
        }
    }
    return out;
}

}  // namespace momenta
