#include "momenta/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "momenta/action.hpp"
#include "momenta/gauge2d.hpp"
#include "momenta/normalform.hpp"
#include "momenta/reduction.hpp"
#include "momenta/repvar.hpp"
#include "momenta/samplers.hpp"
#include "momenta/symplin.hpp"

namespace momenta {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

json matrix_json(const Mat& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const Vec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

/// Identity checked by each named module-level check.
std::string anchor_for(const std::string& check, const std::string& fallback)
{
    static const std::map<std::string, std::string> anchors = {
        {"jacobian_consistency", "analytic Jacobian agrees with finite differences"},
        {"f_sing_vanishes_on_coimg", "f_sing(0, x2) = 0"},
        {"f_sing_derivative_at_origin", "D f_sing(0) = 0"},
        {"chart_identity", "phi^-1 f psi^-1 (x1, x2) = (f_sing(x1, x2), T x2)"},
        {"psi_roundtrip", "psi^-1 psi = id"},
        {"zero_set", "zeros of f~ correspond to zeros of f_sing"},
        {"phi_coker_identity", "D phi restricted to coker is the identity"},
        {"coker_equals_stabilizer_algebra", "coker DJ(m) = g_m"},
        {"ker_equals_symplectic_normal_space", "ker of the singular chart = symplectic normal space E"},
        {"omega_bar0_antisymmetric", "omega_bar(0) is antisymmetric"},
        {"omega_bar0_nondegenerate", "omega_bar(0) is nondegenerate"},
        {"momentum_identity", "omega_bar(xi.x, v) + d<J_sing, xi>(x) v = 0"},
        {"quadratic_identity", "J_sing(x) = 1/2 omega_bar_0(x, xi.x)"},
        {"pullback_constant", "Moser pullback of omega_bar is constant"},
        {"witnesses_on_level", "J(witness) = mu"},
        {"witnesses_share_orbit_type", "all witnesses of a stratum share one orbit type"},
        {"reduced_dim_constant", "dim E^{G_m} is constant on the stratum"},
        {"reduced_form_antisymmetric", "reduced form is antisymmetric"},
        {"reduced_form_nondegenerate", "reduced form is nondegenerate (1 / sigma_min)"},
        {"reduced_dim_even", "reduced dimension is even"},
        {"witt_artin_direct_sum", "T_m X = q.m (+) g_mu.m (+) E (+) F"},
        {"witt_artin_ker", "ker DJ(m) = g_mu.m (+) E"},
        {"witt_artin_parity", "2 dim g_m - dim E is even"},
        {"local_model_dimension", "stratum dimension agrees with the local model"},
    };
    auto it = anchors.find(check);
    return it != anchors.end() ? it->second : fallback;
}

/// Folds every check of a verification report into the suite, keyed by name + suffix.
void merge_report(Suite& suite, const VerificationReport& report, const std::string& suffix, const std::string& anchor)
{
    for (const InvariantCheck& c : report.checks)
    {
        const std::string name = c.name + suffix;
        auto it = std::find_if(suite.checks.begin(), suite.checks.end(),
                               [&](const Check& k) { return k.name == name; });
        Check& target = it != suite.checks.end() ? *it : suite.add(name, anchor_for(c.name, anchor), c.tolerance);
        target.observe(c.max_residual);
    }
}

LieAlgebraAction torus_action(const CompactGroupRep& rep)
{
    return rep.lie_algebra_action(make_complex_model(static_cast<int>(rep.torus().weights.cols())));
}

HamiltonianSystem quartic_invariant()
{
    HamiltonianSystem s;
    s.h = [](const Vec& x) { return (x(0) * x(0) + x(1) * x(1)) * (x(2) * x(2) + x(3) * x(3)); };
    s.grad = [](const Vec& x) {
        const double a = x(0) * x(0) + x(1) * x(1), b = x(2) * x(2) + x(3) * x(3);
        Vec g(4);
        g << 2 * x(0) * b, 2 * x(1) * b, 2 * x(2) * a, 2 * x(3) * a;
        return g;
    };
    return s;
}

}  // namespace

void Check::observe(double residual)
{
    ++samples;
    if (std::isnan(residual))
        residual = INFINITY;
    max_residual = std::max(max_residual, residual);
}

Check& Suite::add(const std::string& check_name, const std::string& anchor, double base_tolerance)
{
    Check c;
    c.name = check_name;
    c.anchor = anchor;
    c.tolerance = base_tolerance * tol_scale;
    checks.push_back(std::move(c));
    return checks.back();
}

bool Suite::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

json Suite::to_json() const
{
    json cs = json::array();
    for (const Check& c : checks)
        cs.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"max_residual", std::isfinite(c.max_residual) ? json(c.max_residual) : json("inf")},
                      {"tolerance", c.tolerance},
                      {"samples", c.samples},
                      {"pass", c.pass()}});
    return {{"suite", name}, {"checks", cs}, {"data", data}, {"pass", pass()}};
}

Suite suite_double_orthogonal(Rng& rng, int trials, double tol_scale)
{
    Suite s{"double_orthogonal", tol_scale};
    Check& dist = s.add("double_orthogonal_distance", "V^{omega omega} = V for finite-dimensional V", 1e-8);
    Check& dims = s.add("orthogonal_dimension", "dim V + dim V^omega = dim X", 0.0);
    std::uniform_int_distribution<int> half(1, 10);
    for (int t = 0; t < trials; ++t)
    {
        const int n = half(rng);
        SymplecticSpace sp(random_symplectic_form(rng, n));
        std::uniform_int_distribution<int> kd(0, 2 * n);
        Subspace v(2 * n, random_normal(rng, 2 * n, kd(rng)));
        dist.observe(double_orthogonal_check(sp, v).distance);
        dims.observe(std::abs(static_cast<double>(v.dim() + symplectic_orthogonal(sp, v).dim() - 2 * n)));
    }
    s.data["trials"] = trials;
    return s;
}

Suite suite_invariant_splitting(Rng& rng, int reps, double tol_scale)
{
    Suite s{"invariant_splitting", tol_scale};
    Check& sum = s.add("projector_sum", "X = X_G (+) (X_G)^omega", 1e-8);
    Check& inv = s.add("fixed_invariance", "g x = x on X_G", 1e-8);
    Check& symp = s.add("fixed_is_symplectic", "X_G cap (X_G)^omega = 0", 0.0);
    Check& dims = s.add("splitting_dimension", "dim X_G + dim (X_G)^omega = dim X", 0.0);
    json kinds = json::array();
    for (int r = 0; r < reps; ++r)
    {
        SymplecticSpace c3 = make_complex_model(3);
        std::optional<CompactGroupRep> rep;
        if (r % 2 == 0)
        {
            Mat conj = random_symplectic_matrix(rng, c3.omega());
            std::uniform_int_distribution<int> mult(0, 2), ord(2, 6);
            std::vector<int> mults = {mult(rng), mult(rng), mult(rng)};
            const int order = ord(rng);
            rep.emplace(cyclic_group(order, mults, conj));
            kinds.push_back("cyclic_" + std::to_string(order));
        }
        else
        {
            std::uniform_int_distribution<int> kd(1, 2);
            rep.emplace(TorusRep{random_weights(rng, kd(rng), 3, 2)});
            kinds.push_back("torus_" + std::to_string(rep->torus().weights.rows()));
        }
        FixedPointSplitting sp = fixed_point_splitting(c3, *rep);
        sum.observe(sp.projector_sum_residual);
        inv.observe(sp.invariance_residual);
        symp.observe(sp.fixed.dim() == 0 || is_symplectic_subspace(c3, sp.fixed) ? 0.0 : 1.0);
        dims.observe(std::abs(static_cast<double>(sp.fixed.dim() + sp.complement.dim() - 6)));
    }
    s.data["representations"] = kinds;
    return s;
}

Suite suite_momentum_relation(Rng& rng, int triples, double tol_scale)
{
    Suite s{"momentum_relation", tol_scale};
    Check& rel = s.add("momentum_relation", "omega(xi.x, v) + dJ_xi(x) v = 0", 1e-12);
    std::uniform_int_distribution<int> dims(1, 3);
    for (int t = 0; t < triples; ++t)
    {
        const Eigen::Index k = dims(rng), n = dims(rng) + 1;
        LieAlgebraAction act(make_complex_model(static_cast<int>(n)), torus_generators(random_weights(rng, k, n)));
        Vec x = random_normal(rng, 2 * n), v = random_normal(rng, 2 * n);
        for (Eigen::Index i = 0; i < k; ++i)
            rel.observe(momentum_relation_residual(act, x, v, i));
    }
    s.data["triples"] = triples;
    return s;
}

Suite suite_bifurcation(Rng& rng, int points, double tol_scale)
{
    Suite s{"bifurcation", tol_scale};
    Check& c1 = s.add("ker_is_orbit_orthogonal", "ker DJ(m) = (g.m)^omega", 1e-8);
    Check& c2 = s.add("image_annihilator", "(im DJ(m))^0 = g_m", 1e-8);
    Check& c3 = s.add("ker_orthogonal_is_orbit", "(ker DJ(m))^omega = g.m", 1e-8);
    Check& c4 = s.add("ker_radical", "ker DJ(m) cap (ker DJ(m))^omega = g_mu.m", 1e-8);
    Check& par = s.add("witt_artin_parity", "2 dim g_m - dim E is even", 0.0);
    Check& dsum = s.add("witt_artin_direct_sum", "T_m X = q.m (+) g_mu.m (+) E (+) F", 1e-8);
    Check& ker = s.add("witt_artin_ker", "ker DJ(m) = g_mu.m (+) E", 1e-8);
    auto observe = [&](const LieAlgebraAction& act, const CompactGroupRep& rep, const Vec& x) {
        BifurcationResult b = bifurcation_check(act, x);
        c1.observe(b.ker_is_orbit_orthogonal);
        c2.observe(b.image_annihilator);
        c3.observe(b.ker_orthogonal_is_orbit);
        c4.observe(b.ker_radical);
        WittArtinDecomposition wa = witt_artin(act, rep, x);
        par.observe(wa.parity_even ? 0.0 : 1.0);
        dsum.observe(wa.direct_sum_residual);
        ker.observe(wa.ker_residual);
    };
    std::uniform_int_distribution<int> wd(-2, 2), kd(1, 2);
    std::bernoulli_distribution drop(0.3);
    json reps = json::array();
    for (int r = 0; r < 6; ++r)
    {
        IMat w(kd(rng), 3);
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w(i) = wd(rng);
        CompactGroupRep rep(TorusRep{w});
        LieAlgebraAction act = torus_action(rep);
        reps.push_back(matrix_json(w.cast<double>()));
        for (int p = 0; p < points; ++p)
        {
            Vec x = random_normal(rng, 6);
            // Zeroed coordinate pairs give nontrivial stabilizers.
            for (Eigen::Index j = 0; j < 3; ++j)
                if (drop(rng))
                    x.segment(2 * j, 2).setZero();
            observe(act, rep, x);
        }
    }
    CompactGroupRep su2(su2_on_c2());
    LieAlgebraAction sact = su2.lie_algebra_action(make_complex_model(2));
    for (int p = 0; p < points; ++p)
        observe(sact, su2, random_normal(rng, 4));
    s.data["torus_weights"] = reps;
    s.data["points_per_rep"] = points;
    return s;
}

Suite suite_normal_form(Rng& rng, const std::vector<std::string>& models, int samples, double tol_scale)
{
    Suite s{"normal_form", tol_scale};
    const std::vector<std::string> names = models.empty() ? demo_model_names() : models;
    Check& done = s.add("models_completed", "normal form constructed for every model", 0.0);
    json per_model = json::object();
    for (const std::string& name : names)
    {
        SmoothMap map = demo_model(name);
        try
        {
            NormalFormResult r = compute_normal_form(map, rng, samples);
            merge_report(s, r.report, "", "phi^-1 f psi^-1 (x1, x2) = (f_sing(x1, x2), T x2)");
            per_model[name] = {{"ker_dim", r.data->ker_dim()},
                               {"coker_dim", r.data->coker_dim()},
                               {"pass", r.report.pass()}};
            done.observe(0.0);
        }
        catch (const NumericalError& e)
        {
            per_model[name] = {{"error", e.what()}};
            done.observe(1.0);
        }
    }
    s.data["models"] = per_model;
    return s;
}

Suite suite_mgs(Rng& rng, int samples, double tol_scale)
{
    Suite s{"mgs", tol_scale};
    CompactGroupRep rep(TorusRep{(IMat(1, 2) << 1, -1).finished()});
    LieAlgebraAction act = torus_action(rep);
    const std::string anchor = "omega_bar(xi.x, v) + d<J_sing, xi>(x) v = 0";

    MGSData origin = assemble_mgs(act, rep, Vec::Zero(4), rng, samples);
    merge_report(s, origin.report, "@origin", anchor);
    s.add("strong_at_origin", "J_sing is the quadratic map of a constant form", 0.0).observe(origin.strong ? 0.0 : 1.0);

    Vec m(4);
    m << 1, 0, 1, 0;
    m /= std::sqrt(2.0);
    MGSData free_pt = assemble_mgs(act, rep, m, rng, samples);
    merge_report(s, free_pt.report, "@free_point", anchor);

    s.data["origin"] = {{"ker_dim", origin.ker_dim}, {"strong", origin.strong}};
    s.data["free_point"] = {{"ker_dim", free_pt.ker_dim}, {"point", vector_json(m)}};
    return s;
}

Suite suite_linear_reduction(Rng& rng, const IMat& weights, const Vec& mu, double tol_scale)
{
    Suite s{"linear_reduction", tol_scale};
    CompactGroupRep rep(TorusRep{weights});
    LieAlgebraAction act = torus_action(rep);
    StrataResult sr = mu.size() == 0 ? strata_of_zero_level(act, rep, rng) : strata_of_level(act, rep, mu, rng);
    Check& rank = s.add("reduced_form_full_rank", "reduced form on E^{G_m} is nondegenerate", 0.0);
    json strata = json::array();
    for (const StratumReport& st : sr.strata)
    {
        merge_report(s, st.report, "", "orbit-type stratum of the level set is a symplectic manifold");
        rank.observe(static_cast<double>(st.reduced_dim - numerical_rank(st.reduced_form)));
        strata.push_back({{"orbit_type", st.orbit_type_id},
                          {"stabilizer_dim", st.stabilizer.dimension},
                          {"reduced_dim", st.reduced_dim},
                          {"ambient_dim", st.ambient_dim},
                          {"witnesses", st.witnesses.size()},
                          {"reduced_form", matrix_json(st.reduced_form)}});
    }
    FrontierResult fr = frontier_check(act, rep, sr, rng);
    s.add("frontier_violations", "lower strata lie in the closure of higher ones with smaller dimension", 0.0)
        .observe(static_cast<double>(fr.violations.size()));
    json order = json::array();
    for (const FrontierRelation& r : fr.order)
        order.push_back({{"lower", r.lower}, {"upper", r.upper}, {"method", r.method}});
    s.data["weights"] = matrix_json(weights.cast<double>());
    s.data["mu"] = vector_json(sr.mu);
    s.data["strata"] = strata;
    s.data["frontier"] = order;
    s.data["frontier_inconclusive"] = fr.inconclusive;
    s.data["exhaustive"] = sr.exhaustive;
    s.data["notes"] = sr.notes;
    return s;
}

Suite suite_reduction_examples(Rng& rng, double tol_scale)
{
    Suite s{"reduction_examples", tol_scale};
    auto dims_of = [](const Suite& sub) {
        std::vector<long long> d;
        for (const auto& st : sub.data["strata"])
            d.push_back(st["reduced_dim"].get<long long>());
        std::sort(d.begin(), d.end());
        return d;
    };
    auto fold = [&s](const Suite& sub, const std::string& suffix) {
        for (Check c : sub.checks)
        {
            c.name += suffix;
            s.checks.push_back(std::move(c));
        }
    };

    Suite a = suite_linear_reduction(rng, (IMat(1, 2) << 1, -1).finished(), Vec(), tol_scale);
    fold(a, "@(1,-1)");
    const std::vector<long long> da = dims_of(a);
    s.add("strata_dims@(1,-1)", "zero level of weights (1,-1) has strata of reduced dims {0, 2}", 0.0)
        .observe(da == std::vector<long long>{0, 2} ? 0.0 : 1.0);
    bool ray = false;
    for (const auto& r : a.data["frontier"])
        if (r["method"] == "ray_scaling")
            ray = true;
    s.add("frontier_ray_scaling@(1,-1)", "origin lies in the closure of the free stratum by ray scaling", 0.0)
        .observe(ray && a.data["frontier"].size() == 1 ? 0.0 : 1.0);

    Suite b = suite_linear_reduction(rng, (IMat(1, 2) << 1, 1).finished(), Vec(), tol_scale);
    fold(b, "@(1,1)");
    s.add("strata_dims@(1,1)", "zero level of weights (1,1) is the origin alone", 0.0)
        .observe(dims_of(b) == std::vector<long long>{0} ? 0.0 : 1.0);

    s.data["(1,-1)"] = a.data;
    s.data["(1,1)"] = b.data;
    return s;
}

Suite suite_reduced_dynamics(Rng& rng, double t_end, double dt, double tol_scale)
{
    Suite s{"reduced_dynamics", tol_scale};
    CompactGroupRep rep(TorusRep{(IMat(1, 2) << 1, -1).finished()});
    LieAlgebraAction act = torus_action(rep);
    StrataResult sr = strata_of_zero_level(act, rep, rng);
    const StratumReport* top = &sr.strata.front();
    for (const StratumReport& st : sr.strata)
        if (st.reduced_dim > top->reduced_dim)
            top = &st;
    DynamicsReport d = reduced_dynamics_check(act, rep, quartic_invariant(), *top, t_end, dt);
    s.add("noether_drift", "J is constant along flows of invariant Hamiltonians", 1e-6).observe(d.noether_drift);
    s.add("projected_vs_reduced", "the flow on the stratum projects to the reduced Hamiltonian flow", 1e-4)
        .observe(d.max_mismatch);
    s.add("orbit_type_preserved", "invariant flows preserve orbit type", 0.0)
        .observe(d.orbit_type_preserved ? 0.0 : 1.0);
    s.add("full_window", "comparison covers the whole time interval", 0.0).observe(d.shortened ? 1.0 : 0.0);
    s.data = {{"t_end", t_end},
              {"dt", dt},
              {"stratum", top->orbit_type_id},
              {"compared_until", d.compared_until},
              {"recenterings", d.recenterings},
              {"notes", d.notes}};
    return s;
}

Suite suite_gauge_flat(Rng& rng, int genus, int transforms, int targets, int grid, double tol_scale)
{
    Suite s{"gauge_flat", tol_scale};
    SurfaceMesh mesh = build_genus_surface(genus, grid);
    HodgeSolver hodge(mesh);
    const Eigen::Index b1 = 2 * genus;

    s.add("euler_characteristic", "V - E + F = 2 - 2g", 0.0)
        .observe(std::abs(static_cast<double>(mesh.euler_characteristic() - (2 - b1))));
    const Eigen::Index hdim = harmonic_dimension(hodge);
    s.add("harmonic_dimension", "dim of harmonic 1-cochains = 2g", 0.0)
        .observe(std::abs(static_cast<double>(hdim - b1)));

    Check& mom = s.add("momentum_identity", "cup(-d0 phi, alpha) + kappa(-d1 alpha, phi) = 0", 1e-12);
    Check& orth = s.add("hodge_orthogonality", "exact, coexact and harmonic parts are orthogonal", 1e-10);
    for (int t = 0; t < 100; ++t)
    {
        mom.observe(momentum_relation_residual(mesh, random_normal(rng, mesh.n_vertices()),
                                               random_normal(rng, mesh.n_edges())));
        if (t < 10)
            orth.observe(hodge.split(random_normal(rng, mesh.n_edges())).orthogonality);
    }

    // Chern numbers of flat, pure-gauge and monopole connections under gauge transformations.
    Check& chern = s.add("chern_gauge_invariance", "Chern number is unchanged by gauge transformations", 0.0);
    Check& chern_val = s.add("chern_values", "flat and pure-gauge connections have c = 0, the monopole c = 1", 0.0);
    const Vec pure_gauge = coboundary0(mesh, 3.0 * random_normal(rng, mesh.n_vertices()));
    const Vec monopole = central_ym_connection(mesh, 1);
    const std::vector<std::pair<Vec, long long>> connections = {
        {Vec::Zero(mesh.n_edges()), 0}, {pure_gauge, 0}, {monopole, 1}};
    for (const auto& [theta, c] : connections)
    {
        const long long c0 = curvature_and_chern(mesh, theta).chern;
        chern_val.observe(std::abs(static_cast<double>(c0 - c)));
        for (int t = 0; t < transforms; ++t)
        {
            Vec phi = 10.0 * random_normal(rng, mesh.n_vertices());
            chern.observe(curvature_and_chern(mesh, gauge_action(mesh, theta, phi)).chern == c0 ? 0.0 : 1.0);
        }
    }

    CycleBasis cb = homology_cycle_basis(mesh, hodge);
    s.add("cycles_closed", "B1 gamma = 0 for every basis cycle", 0.0)
        .observe(Mat(mesh.boundary1() * cb.cycles).cwiseAbs().maxCoeff());
    s.add("intersection_antisymmetric", "Q^T = -Q", 0.0)
        .observe((cb.intersection + cb.intersection.transpose()).cwiseAbs().maxCoeff());
    s.add("intersection_unimodular", "|det Q| = 1", 0.0)
        .observe(std::abs(std::abs(std::round(cb.intersection.determinant())) - 1.0));

    ReducedIntersection ri = reduced_intersection_check(mesh, cb, rng);
    s.add("reduced_form_antisymmetric", "omega on harmonic cochains is antisymmetric", 1e-10).observe(ri.antisymmetry);
    s.add("reduced_form_full_rank", "omega on harmonic cochains has rank 2g", 0.0)
        .observe(static_cast<double>(b1 - numerical_rank(ri.form)));
    s.add("reduced_form_integrality", "omega on dual harmonic cochains equals the intersection form", 1e-6)
        .observe(ri.integrality);
    s.add("reduced_form_darboux", "S^T omega S = J_2g for a computed Darboux basis S", 1e-10)
        .observe(ri.darboux_residual);
    s.add("exact_pairing", "omega(h, d0 phi) = 0 for harmonic h", 1e-10).observe(ri.exact_pairing);

    Check& wil = s.add("wilson_gauge_invariance", "holonomies are invariant under gauge transformations", 1e-10);
    Check& hit = s.add("wilson_targets", "harmonic construction realizes any point of U(1)^{2g}", 1e-6);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    for (int t = 0; t < targets; ++t)
    {
        Vec target(b1);
        for (Eigen::Index i = 0; i < b1; ++i)
            target(i) = ang(rng);
        Vec theta = harmonic_connection(cb, target);
        Vec hol = wilson_flat_moduli(mesh, theta, cb);
        Vec gauged = wilson_flat_moduli(mesh, gauge_action(mesh, theta, 5.0 * random_normal(rng, mesh.n_vertices())), cb);
        for (Eigen::Index i = 0; i < b1; ++i)
        {
            hit.observe(std::abs(wrap_angle(hol(i) - target(i))));
            wil.observe(std::abs(wrap_angle(gauged(i) - hol(i))));
        }
    }

    s.data = {{"genus", genus},
              {"vertices", mesh.n_vertices()},
              {"edges", mesh.n_edges()},
              {"faces", mesh.n_faces()},
              {"harmonic_dim", hdim},
              {"intersection", matrix_json(cb.intersection)}};
    return s;
}

Suite suite_gauge_ym(Rng& rng, int genus, const std::vector<long long>& chern, int transforms, int grid,
                     double tol_scale)
{
    Suite s{"gauge_ym", tol_scale};
    SurfaceMesh mesh = build_genus_surface(genus, grid);
    Check& num = s.add("chern_number", "Chern number of the central connection equals c", 0.0);
    Check& uni = s.add("uniform_curvature", "curvature is 2 pi c / F on every face", 1e-10);
    Check& tot = s.add("total_curvature", "sum of curvature = 2 pi c", 1e-9);
    Check& inv = s.add("chern_gauge_invariance", "Chern number is unchanged by gauge transformations", 0.0);
    json per = json::array();
    for (long long c : chern)
    {
        Vec theta = central_ym_connection(mesh, c);
        CurvatureResult r = curvature_and_chern(mesh, theta);
        num.observe(std::abs(static_cast<double>(r.chern - c)));
        const double u = kTwoPi * static_cast<double>(c) / static_cast<double>(mesh.n_faces());
        uni.observe((r.curvature.array() - u).abs().maxCoeff());
        tot.observe(std::abs(r.curvature.sum() - kTwoPi * static_cast<double>(c)));
        for (int t = 0; t < transforms; ++t)
        {
            Vec phi = 10.0 * random_normal(rng, mesh.n_vertices());
            inv.observe(curvature_and_chern(mesh, gauge_action(mesh, theta, phi)).chern == c ? 0.0 : 1.0);
        }
        per.push_back({{"chern", c}, {"computed_chern", r.chern}, {"curvature_per_face", u}});
    }
    s.data = {{"genus", genus}, {"faces", mesh.n_faces()}, {"connections", per}};
    return s;
}

Suite suite_repvar(int genus, int samples, std::uint64_t base_seed, double tol_scale)
{
    Suite s{"repvar", tol_scale};
    RepSurvey sv = survey_rep_variety(genus, samples, base_seed);
    const double frac = static_cast<double>(sv.converged) / static_cast<double>(samples);
    s.add("convergence_shortfall", "at least 90% of seeds reach the relator", 0.0).observe(std::max(0.0, 0.9 - frac));
    s.add("relator_residual", "prod [a_i, b_i] = 1", 1e-10).observe(sv.max_residual);
    s.add("conjugation_residual", "conjugation preserves the relator", 1e-10).observe(sv.max_conjugation_residual);
    s.add("conjugation_class_stable", "stabilizer class is conjugation invariant", 0.0)
        .observe(static_cast<double>(sv.conjugation_class_changes));
    s.add("reduced_dims_even", "orbit-type strata have even dimension", 0.0).observe(sv.all_reduced_even ? 0.0 : 1.0);
    s.add("rank_unambiguous", "relator Jacobian rank is well separated", 0.0)
        .observe(static_cast<double>(sv.rank_ambiguous));

    json classes = json::array();
    int center = 0;
    for (const RepClassSummary& c : sv.classes)
    {
        classes.push_back({{"class", to_string(c.cls)},
                           {"count", c.count},
                           {"hom_dimensions", c.hom_dimensions},
                           {"reduced_dimensions", c.reduced_dimensions}});
        if (c.cls == StabilizerClass::center)
        {
            center = c.count;
            if (genus >= 2)
            {
                const int hom = 6 * genus - 3, red = 6 * genus - 6;
                s.add("center_hom_dimension", "hom dimension 6g - 3 at irreducible points", 0.0)
                    .observe(c.hom_dimensions == std::vector<int>{hom} ? 0.0 : 1.0);
                s.add("center_reduced_dimension", "reduced dimension 6g - 6 at irreducible points", 0.0)
                    .observe(c.reduced_dimensions == std::vector<int>{red} ? 0.0 : 1.0);
            }
        }
    }
    if (genus >= 2)
        s.add("center_class_present", "generic points have central stabilizer", 0.0).observe(center > 0 ? 0.0 : 1.0);
    s.data = {{"genus", genus},
              {"samples", samples},
              {"base_seed", base_seed},
              {"converged", sv.converged},
              {"classes", classes}};
    return s;
}

}  // namespace momenta
