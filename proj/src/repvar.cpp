#include "momenta/repvar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace momenta {

namespace {

constexpr double kStabilizerZero = 1e-6;
constexpr double kRankRel = 1e-6;
constexpr double kSolvedTol = 1e-10;
constexpr double kTargetTol = 1e-13;

// (w, x, y, z); Eigen stores (x, y, z, w).
Eigen::Vector4d wxyz(const Quat& q) { return {q.w(), q.x(), q.y(), q.z()}; }

Quat pure(int axis)
{
    Quat u(0.0, 0.0, 0.0, 0.0);
    u.coeffs()(axis) = 1.0;
    return u;
}

Quat exp_pure(const Eigen::Vector3d& v)
{
    const double t = v.norm();
    if (t == 0.0)
        return Quat::Identity();
    const Eigen::Vector3d s = std::sin(t) / t * v;
    return Quat(std::cos(t), s.x(), s.y(), s.z());
}

struct Letter
{
    std::size_t element;
    bool inverse;
};

std::vector<Letter> relator_word(std::size_t g)
{
    std::vector<Letter> w;
    for (std::size_t i = 0; i < g; ++i)
    {
        w.push_back({2 * i, false});
        w.push_back({2 * i + 1, false});
        w.push_back({2 * i, true});
        w.push_back({2 * i + 1, true});
    }
    return w;
}

Quat letter_value(const std::vector<Quat>& x, const Letter& l)
{
    return l.inverse ? x[l.element].conjugate() : x[l.element];
}

void check_elements(const std::vector<Quat>& x)
{
    if (x.empty() || x.size() % 2 != 0)
        throw InputError("representation needs 2g elements with g >= 1");
}

Quat random_unit_quat(Rng& rng)
{
    Vec v = random_unit(rng, 4);
    return Quat(v(0), v(1), v(2), v(3));
}

int stabilizer_dim(StabilizerClass c)
{
    switch (c)
    {
    case StabilizerClass::full_group: return 3;
    case StabilizerClass::circle: return 1;
    case StabilizerClass::center: return 0;
    default: return -1;
    }
}

}  // namespace

Quat relator(const std::vector<Quat>& elements)
{
    check_elements(elements);
    Quat r = Quat::Identity();
    for (const Letter& l : relator_word(elements.size() / 2))
        r = r * letter_value(elements, l);
    return r;
}

double relator_residual(const std::vector<Quat>& elements)
{
    return (wxyz(relator(elements)) - Eigen::Vector4d(1, 0, 0, 0)).norm();
}

Mat relator_jacobian(const std::vector<Quat>& elements)
{
    check_elements(elements);
    const std::vector<Letter> word = relator_word(elements.size() / 2);
    const std::size_t n = word.size();
    // prefix[p] = w_0 ... w_{p-1}, suffix[p] = w_{p+1} ... w_{n-1}.
    std::vector<Quat> prefix(n + 1, Quat::Identity()), suffix(n + 1, Quat::Identity());
    for (std::size_t p = 0; p < n; ++p)
        prefix[p + 1] = prefix[p] * letter_value(elements, word[p]);
    for (std::size_t p = n; p-- > 0;)
        suffix[p] = letter_value(elements, word[p]) * suffix[p + 1];

    Mat jac = Mat::Zero(4, static_cast<Eigen::Index>(3 * elements.size()));
    for (std::size_t p = 0; p < n; ++p)
    {
        const Letter& l = word[p];
        const Quat& xk = elements[l.element];
        for (int axis = 0; axis < 3; ++axis)
        {
            // x exp(d): d(x) = x u, d(x^-1) = -u x^-1.
            const Quat u = pure(axis);
            Eigen::Vector4d col = l.inverse ? Eigen::Vector4d(-wxyz(prefix[p] * u * xk.conjugate() * suffix[p + 1]))
                                            : wxyz(prefix[p] * xk * u * suffix[p + 1]);
            jac.col(static_cast<Eigen::Index>(3 * l.element) + axis) += col;
        }
    }
    return jac;
}

RepPoint solve_rep_from(std::vector<Quat> start, int max_iter)
{
    check_elements(start);
    RepPoint rep;
    rep.g = static_cast<int>(start.size() / 2);
    for (Quat& q : start)
        q.normalize();
    rep.elements = std::move(start);
    rep.residual = relator_residual(rep.elements);

    auto step_to = [](const std::vector<Quat>& x, const Vec& delta, double scale) {
        std::vector<Quat> y(x.size());
        for (std::size_t k = 0; k < x.size(); ++k)
            y[k] = (x[k] * exp_pure(scale * delta.segment<3>(static_cast<Eigen::Index>(3 * k)))).normalized();
        return y;
    };

    while (rep.iterations < max_iter && rep.residual > kTargetTol)
    {
        const Eigen::Vector4d r = wxyz(relator(rep.elements)) - Eigen::Vector4d(1, 0, 0, 0);
        const Vec delta = -pinv(relator_jacobian(rep.elements)) * Vec(r);
        // Backtracking keeps the residual monotone.
        double scale = 1.0;
        bool improved = false;
        for (int b = 0; b < 40 && !improved; ++b, scale *= 0.5)
        {
            std::vector<Quat> trial = step_to(rep.elements, delta, scale);
            const double res = relator_residual(trial);
            if (res < rep.residual)
            {
                rep.elements = std::move(trial);
                rep.residual = res;
                improved = true;
            }
        }
        ++rep.iterations;
        if (!improved)
            break;
    }
    rep.solved = rep.residual <= kSolvedTol;
    return rep;
}

RepPoint solve_rep(int g, std::uint64_t seed, int max_iter)
{
    if (g < 1)
        throw InputError("genus must be at least 1");
    Rng rng(seed);
    std::vector<Quat> start(static_cast<std::size_t>(2 * g));
    for (Quat& q : start)
        q = random_unit_quat(rng);
    return solve_rep_from(std::move(start), max_iter);
}

RepPoint conjugate(const RepPoint& rep, const Quat& q)
{
    RepPoint out = rep;
    const Quat u = q.normalized();
    for (Quat& x : out.elements)
        x = (u * x * u.conjugate()).normalized();
    out.residual = relator_residual(out.elements);
    return out;
}

std::string to_string(StabilizerClass c)
{
    switch (c)
    {
    case StabilizerClass::full_group: return "full_group";
    case StabilizerClass::circle: return "circle";
    case StabilizerClass::center: return "center";
    default: return "indeterminate";
    }
}

StabilizerInfo stabilizer_type(const RepPoint& rep)
{
    check_elements(rep.elements);
    // Rows: x q - q x for pure q, four per element.
    Mat sys(static_cast<Eigen::Index>(4 * rep.elements.size()), 3);
    for (std::size_t k = 0; k < rep.elements.size(); ++k)
        for (int axis = 0; axis < 3; ++axis)
        {
            const Quat u = pure(axis);
            const Quat x = rep.elements[k];
            sys.block<4, 1>(static_cast<Eigen::Index>(4 * k), axis) = wxyz(x * u) - wxyz(u * x);
        }
    StabilizerInfo info;
    info.singular_values = Eigen::JacobiSVD<Mat>(sys).singularValues();
    int nullity = 0;
    bool borderline = false;
    for (Eigen::Index i = 0; i < info.singular_values.size(); ++i)
    {
        const double s = info.singular_values(i);
        if (s < kStabilizerZero)
            ++nullity;
        if (s >= kStabilizerZero / 10.0 && s <= kStabilizerZero * 10.0)
            borderline = true;
    }
    info.commutant_dim = nullity;
    if (borderline)
        return info;
    if (nullity == 3)
        info.cls = StabilizerClass::full_group;
    else if (nullity == 1)
        info.cls = StabilizerClass::circle;
    else if (nullity == 0)
        info.cls = StabilizerClass::center;
    return info;
}

RepStratumReport stratum_dimension(const RepPoint& rep)
{
    if (!rep.solved)
        throw InputError("stratum_dimension needs a solved representation");
    RepStratumReport out;
    out.cls = stabilizer_type(rep).cls;
    const Mat jac = relator_jacobian(rep.elements);
    out.jacobian_singular_values = Eigen::JacobiSVD<Mat>(jac).singularValues();
    const double smax = out.jacobian_singular_values.size() > 0 ? out.jacobian_singular_values(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < out.jacobian_singular_values.size(); ++i)
    {
        const double s = out.jacobian_singular_values(i);
        if (smax > 0.0 && s > kRankRel * smax)
            ++rank;
        if (smax > 0.0 && s >= kRankRel * smax / 10.0 && s <= kRankRel * smax * 10.0)
            out.rank_ambiguous = true;
    }
    out.hom_dimension = 6 * rep.g - rank;
    const int sdim = stabilizer_dim(out.cls);
    if (sdim >= 0)
        out.reduced_dimension = out.hom_dimension - (3 - sdim);
    return out;
}

RepSurvey survey_rep_variety(int g, int samples, std::uint64_t base_seed)
{
    if (g < 1 || samples < 1)
        throw InputError("survey needs g >= 1 and samples >= 1");
    RepSurvey s;
    s.g = g;
    s.samples = samples;
    std::map<StabilizerClass, std::pair<int, std::pair<std::set<int>, std::set<int>>>> by_class;
    for (int i = 0; i < samples; ++i)
    {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
        RepPoint rep = solve_rep(g, seed);
        if (!rep.solved)
            continue;
        ++s.converged;
        s.max_residual = std::max(s.max_residual, rep.residual);
        RepStratumReport st = stratum_dimension(rep);
        if (st.rank_ambiguous)
            ++s.rank_ambiguous;
        auto& entry = by_class[st.cls];
        ++entry.first;
        entry.second.first.insert(st.hom_dimension);
        if (st.reduced_dimension >= 0)
        {
            entry.second.second.insert(st.reduced_dimension);
            if (st.reduced_dimension % 2 != 0)
                s.all_reduced_even = false;
        }
        Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        for (int t = 0; t < 20; ++t)
        {
            RepPoint c = conjugate(rep, random_unit_quat(rng));
            s.max_conjugation_residual = std::max(s.max_conjugation_residual, c.residual);
            if (stabilizer_type(c).cls != st.cls)
                ++s.conjugation_class_changes;
        }
    }
    for (const auto& [cls, entry] : by_class)
    {
        RepClassSummary c;
        c.cls = cls;
        c.count = entry.first;
        c.hom_dimensions.assign(entry.second.first.begin(), entry.second.first.end());
        c.reduced_dimensions.assign(entry.second.second.begin(), entry.second.second.end());
        s.classes.push_back(std::move(c));
    }
    return s;
}

}  // namespace momenta
