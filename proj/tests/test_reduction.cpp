#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "momenta/reduction.hpp"
#include "momenta/symplin.hpp"
#include "test_support.hpp"

using namespace momenta;
using namespace momenta::testing;

namespace {

CompactGroupRep torus(std::initializer_list<std::initializer_list<int>> rows)
{
    IMat w(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows)
    {
        Eigen::Index j = 0;
        for (int v : r)
            w(i, j++) = v;
        ++i;
    }
    return CompactGroupRep(TorusRep{w});
}

LieAlgebraAction torus_action(const CompactGroupRep& rep)
{
    return rep.lie_algebra_action(make_complex_model(static_cast<int>(rep.torus().weights.cols())));
}

Vec free_zero_level_point()
{
    Vec m(4);
    m << 1, 0, 1, 0;
    return m / std::sqrt(2.0);
}

CompactGroupRep z2_on_plane() { return CompactGroupRep(FiniteGroup({Mat::Identity(2, 2), -Mat::Identity(2, 2)})); }

std::vector<Eigen::Index> reduced_dims(const StrataResult& s)
{
    std::vector<Eigen::Index> d;
    for (const auto& st : s.strata)
        d.push_back(st.reduced_dim);
    std::sort(d.begin(), d.end());
    return d;
}

const StratumReport& largest(const StrataResult& s)
{
    return *std::max_element(s.strata.begin(), s.strata.end(),
                             [](const auto& a, const auto& b) { return a.ambient_dim < b.ambient_dim; });
}

/// |z_1|^2 |z_2|^2 and its gradient.
HamiltonianSystem product_of_actions()
{
    HamiltonianSystem s;
    s.h = [](const Vec& x) { return (x(0) * x(0) + x(1) * x(1)) * (x(2) * x(2) + x(3) * x(3)); };
    s.grad = [](const Vec& x) {
        double a = x(0) * x(0) + x(1) * x(1), b = x(2) * x(2) + x(3) * x(3);
        Vec g(4);
        g << 2 * x(0) * b, 2 * x(1) * b, 2 * x(2) * a, 2 * x(3) * a;
        return g;
    };
    return s;
}

}  // namespace

TEST_SUITE("reduction")
{
    TEST_CASE("subspace identities at the origin and at a free point")
    {
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        CHECK(bifurcation_check(act, Vec::Zero(4)).max_distance() <= 1e-12);
        Vec m = free_zero_level_point();
        CHECK(bifurcation_check(act, m).max_distance() <= 1e-10);
        // Rank count: DJ(m) has rank 1, so ker DJ has dimension 3.
        CHECK(null_space(momentum_jacobian(act, m), Eigen::Index(4), 1e-10).cols() == 3);
    }

    TEST_CASE("subspace identities at random points of random reps")
    {
        Rng rng(50);
        std::uniform_int_distribution<int> wd(-2, 2);
        std::uniform_int_distribution<int> kd(1, 2);
        std::bernoulli_distribution drop(0.3);
        double worst = 0.0;
        for (int rep_i = 0; rep_i < 6; ++rep_i)
        {
            const Eigen::Index k = kd(rng), n = 3;
            IMat w(k, n);
            for (Eigen::Index i = 0; i < w.size(); ++i)
                w(i) = wd(rng);
            CompactGroupRep rep(TorusRep{w});
            LieAlgebraAction act = torus_action(rep);
            for (int s = 0; s < 50; ++s)
            {
                Vec x = random_normal(rng, 2 * n);
                // Zeroing coordinate pairs produces nontrivial stabilizers.
                for (Eigen::Index j = 0; j < n; ++j)
                    if (drop(rng))
                        x.segment(2 * j, 2).setZero();
                worst = std::max(worst, bifurcation_check(act, x).max_distance());
                WittArtinDecomposition wa = witt_artin(act, rep, x);
                CHECK(wa.parity_even);
                CHECK(wa.direct_sum_residual <= 1e-8);
                CHECK(wa.ker_residual <= 1e-8);
            }
        }
        CHECK(worst <= 1e-8);

        CompactGroupRep su2(su2_on_c2());
        LieAlgebraAction sact = su2.lie_algebra_action(make_complex_model(2));
        for (int s = 0; s < 50; ++s)
        {
            Vec x = random_normal(rng, 4);
            CHECK(bifurcation_check(sact, x).max_distance() <= 1e-8);
            CHECK(witt_artin(sact, su2, x).parity_even);
        }
    }

    TEST_CASE("Witt-Artin block dimensions")
    {
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        WittArtinDecomposition o = witt_artin(act, rep, Vec::Zero(4));
        CHECK(o.q_m.cols() == 0);
        CHECK(o.gmu_m.cols() == 0);
        CHECK(o.e.cols() == 4);
        CHECK(o.f.cols() == 0);
        CHECK(o.stabilizer_dim == 1);
        CHECK(o.parity_even);

        WittArtinDecomposition f = witt_artin(act, rep, free_zero_level_point());
        CHECK(f.q_m.cols() == 0);
        CHECK(f.gmu_m.cols() == 1);
        CHECK(f.e.cols() == 2);
        CHECK(f.f.cols() == 1);
        CHECK(f.direct_sum_residual <= 1e-8);
        CHECK(f.ker_residual <= 1e-8);
        CHECK(f.e_form_min_singular > 0.1);

        SymplecticSpace r4 = make_standard(2);
        CompactGroupRep trivial(FiniteGroup({Mat::Identity(4, 4)}));
        LieAlgebraAction none = trivial.lie_algebra_action(r4);
        WittArtinDecomposition t = witt_artin(none, trivial, Vec::Zero(4));
        CHECK(t.e.cols() == 4);
        CHECK(t.ker_residual <= 1e-12);
    }

    TEST_CASE("level projection")
    {
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        Vec m = free_zero_level_point();
        LevelProjection same = project_to_level(act, m, Vec::Zero(1));
        CHECK(same.converged);
        CHECK((same.x - m).norm() == 0.0);

        Vec x0(4);
        x0 << 1.1, 0, 0.9, 0;
        LevelProjection p = project_to_level(act, x0, Vec::Zero(1));
        REQUIRE(p.converged);
        CHECK(std::abs(std::hypot(p.x(0), p.x(1)) - std::hypot(p.x(2), p.x(3))) <= 1e-9);
        CHECK(std::abs(p.x(1)) + std::abs(p.x(3)) == 0.0);

        CompactGroupRep rep11 = torus({{1, 1}});
        LieAlgebraAction act11 = torus_action(rep11);
        LevelProjection q = project_to_level(act11, x0, Vec::Zero(1));
        CHECK((q.x.norm() <= 1e-4 || q.near_singular));
        CHECK(q.near_singular);
    }

    TEST_CASE("strata of the zero level for circle actions")
    {
        Rng rng(51);
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        StrataResult s = strata_of_zero_level(act, rep, rng);
        CHECK(s.exhaustive);
        REQUIRE(s.strata.size() == 2);
        CHECK(reduced_dims(s) == std::vector<Eigen::Index>{0, 2});
        for (const auto& st : s.strata)
        {
            CAPTURE(st.orbit_type_id);
            CHECK(st.report.pass());
            if (st.reduced_dim == 2)
            {
                CHECK(st.reduced_form_min_singular > 1e-3);
                CHECK(st.witnesses.size() >= 8);
                CHECK(st.ambient_dim == 3);
            }
        }

        CompactGroupRep rep11 = torus({{1, 1}});
        StrataResult s11 = strata_of_zero_level(torus_action(rep11), rep11, rng);
        REQUIRE(s11.strata.size() == 1);
        CHECK(s11.strata[0].reduced_dim == 0);
        CHECK(s11.strata[0].witnesses.front().norm() == 0.0);
    }

    TEST_CASE("strata with a finite isotropy stratum")
    {
        Rng rng(52);
        CompactGroupRep rep = torus({{2, -2, 1}});
        LieAlgebraAction act = torus_action(rep);
        StrataResult s = strata_of_zero_level(act, rep, rng);
        REQUIRE(s.strata.size() == 3);
        CHECK(reduced_dims(s) == std::vector<Eigen::Index>{0, 2, 4});
        for (const auto& st : s.strata)
            CHECK(st.report.pass());
        FrontierResult fr = frontier_check(act, rep, s, rng);
        CHECK(fr.order.size() == 3);
        CHECK(fr.violations.empty());
        CHECK(fr.inconclusive.empty());
    }

    TEST_CASE("strata of a nonzero level")
    {
        Rng rng(53);
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        Vec mu = momentum(act, Vec::Unit(4, 0));
        StrataResult s = strata_of_level(act, rep, mu, rng);
        // Every point of a nonzero level is free; the reduced space is 2-dimensional.
        REQUIRE(s.strata.size() == 1);
        CHECK(s.strata[0].reduced_dim == 2);
        CHECK(s.strata[0].report.pass());

        CompactGroupRep su2(su2_on_c2());
        LieAlgebraAction sact = su2.lie_algebra_action(make_complex_model(2));
        CHECK_THROWS_AS(strata_of_level(sact, su2, Vec::Unit(3, 0), rng), InputError);
    }

    TEST_CASE("strata for a finite group and for SU(2)")
    {
        Rng rng(54);
        CompactGroupRep z2 = z2_on_plane();
        LieAlgebraAction act = z2.lie_algebra_action(make_standard(1));
        StrataResult s = strata_of_zero_level(act, z2, rng, 50);
        CHECK_FALSE(s.exhaustive);
        REQUIRE(s.strata.size() == 2);
        CHECK(reduced_dims(s) == std::vector<Eigen::Index>{0, 2});
        for (const auto& st : s.strata)
            CHECK(st.report.pass());
        FrontierResult fr = frontier_check(act, z2, s, rng);
        REQUIRE(fr.order.size() == 1);
        CHECK(fr.order[0].method == "ray_scaling");
        const std::string origin_type = s.strata[0].witnesses.front().norm() == 0.0 ? s.strata[0].orbit_type_id
                                                                                     : s.strata[1].orbit_type_id;
        CHECK(fr.order[0].lower == origin_type);

        CompactGroupRep su2(su2_on_c2());
        LieAlgebraAction sact = su2.lie_algebra_action(make_complex_model(2));
        StrataResult ss = strata_of_zero_level(sact, su2, rng, 50);
        REQUIRE(ss.strata.size() == 1);
        CHECK(ss.strata[0].reduced_dim == 0);
    }

    TEST_CASE("frontier order for weights (1,-1)")
    {
        Rng rng(55);
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        StrataResult s = strata_of_zero_level(act, rep, rng);
        FrontierResult fr = frontier_check(act, rep, s, rng);
        REQUIRE(fr.order.size() == 1);
        CHECK(fr.order[0].method == "ray_scaling");
        const auto& lo = std::find_if(s.strata.begin(), s.strata.end(),
                                      [&](const auto& st) { return st.orbit_type_id == fr.order[0].lower; });
        CHECK(lo->reduced_dim == 0);
        CHECK(fr.violations.empty());

        CompactGroupRep rep11 = torus({{1, 1}});
        LieAlgebraAction act11 = torus_action(rep11);
        FrontierResult f11 = frontier_check(act11, rep11, strata_of_zero_level(act11, rep11, rng), rng);
        CHECK(f11.order.empty());
        CHECK(f11.violations.empty());
    }

    TEST_CASE("orbit distance")
    {
        CompactGroupRep rep = torus({{1, -1}});
        Rng rng(56);
        Vec x = random_normal(rng, 4);
        Vec t(1);
        t << 0.3137;
        CHECK(orbit_distance(rep, x, torus_element(rep.torus().weights, t) * x) <= 1e-9);
        CHECK(orbit_distance(rep, x, x + Vec::Unit(4, 0)) > 0.1);
        CompactGroupRep z2 = z2_on_plane();
        Vec y = random_normal(rng, 2);
        CHECK(orbit_distance(z2, y, -y) == 0.0);
    }

    TEST_CASE("reduced dynamics on the free stratum")
    {
        Rng rng(57);
        CompactGroupRep rep = torus({{1, -1}});
        LieAlgebraAction act = torus_action(rep);
        StrataResult s = strata_of_zero_level(act, rep, rng);
        const StratumReport& top = largest(s);
        DynamicsReport d = reduced_dynamics_check(act, rep, product_of_actions(), top, 10.0, 1e-3);
        CHECK(d.noether_drift <= 1e-6);
        CHECK(d.orbit_type_preserved);
        CHECK(d.max_mismatch <= 1e-4);
        CHECK_FALSE(d.shortened);
        CHECK(d.compared_until == doctest::Approx(10.0));

        HamiltonianSystem constant{[](const Vec&) { return 1.0; }, [](const Vec& x) { return Vec(Vec::Zero(x.size())); }};
        DynamicsReport c = reduced_dynamics_check(act, rep, constant, top, 2.0, 1e-2);
        CHECK(c.max_mismatch <= 1e-12);
        CHECK(c.recenterings == 0);
    }

    TEST_CASE("reduced dynamics for the finite quotient")
    {
        Rng rng(58);
        CompactGroupRep z2 = z2_on_plane();
        LieAlgebraAction act = z2.lie_algebra_action(make_standard(1));
        StrataResult s = strata_of_zero_level(act, z2, rng, 50);
        HamiltonianSystem osc{[](const Vec& x) { return x.squaredNorm(); }, [](const Vec& x) { return Vec(2.0 * x); }};
        DynamicsReport d = reduced_dynamics_check(act, z2, osc, largest(s), 5.0, 1e-3);
        CHECK(d.max_mismatch <= 1e-6);
        CHECK(d.orbit_type_preserved);
    }
}
