#include "doctest.h"

#include <cmath>

#include "momenta/action.hpp"
#include "momenta/symplin.hpp"
#include "test_support.hpp"

using namespace momenta;
using namespace momenta::testing;

namespace {

LieAlgebraAction circle_on_r2()
{
    Mat a(2, 2);
    a << 0, -1, 1, 0;
    return LieAlgebraAction(make_standard(1), {a}, StructureConstants{Mat::Zero(1, 1)});
}

}  // namespace

TEST_SUITE("action")
{
    TEST_CASE("quadratic momentum examples")
    {
        LieAlgebraAction s1 = circle_on_r2();
        // Symbolic expansion: 1/2 omega(x, A x) = 1/2 (q^2 + p^2).
        for (double q : {1.0, 0.3, -2.0})
            for (double p : {0.0, 1.5})
            {
                Vec x(2);
                x << q, p;
                CHECK(momentum(s1, x)(0) == doctest::Approx(0.5 * (q * q + p * p)).epsilon(1e-14));
            }
        CHECK(momentum(s1, Vec::Zero(2))(0) == 0.0);

        IMat w(1, 2);
        w << 1, -1;
        LieAlgebraAction t(make_complex_model(2), torus_generators(w));
        Vec z(4);
        z << 1, 0, 1, 0;
        CHECK(std::abs(momentum(t, z)(0)) < 1e-15);
        z << 0.3, -1.0, 0.2, 0.5;
        // 1/2 (|z1|^2 - |z2|^2)
        CHECK(momentum(t, z)(0) == doctest::Approx(0.5 * (0.09 + 1.0 - 0.04 - 0.25)));
    }

    TEST_CASE("hamiltonian vector field of a momentum component is the generator")
    {
        Rng rng(20);
        IMat w = random_weights(rng, 2, 3);
        LieAlgebraAction act(make_complex_model(3), torus_generators(w));
        for (int i = 0; i < 2; ++i)
        {
            HamiltonianSystem sys{[&act, i](const Vec& x) { return momentum(act, x)(i); }, nullptr};
            Vec x = random_normal(rng, 6);
            Vec xh = hamiltonian_vector_field(act.space(), sys, x);
            CHECK((xh - act.generators()[static_cast<std::size_t>(i)] * x).norm() < 1e-8);
        }
    }

    TEST_CASE("momentum relation on random torus triples")
    {
        Rng rng(21);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            std::uniform_int_distribution<int> dims(1, 3);
            Eigen::Index k = dims(rng), n = dims(rng) + 1;
            LieAlgebraAction act(make_complex_model(static_cast<int>(n)), torus_generators(random_weights(rng, k, n)));
            Vec x = random_normal(rng, 2 * n), v = random_normal(rng, 2 * n);
            for (Eigen::Index i = 0; i < k; ++i)
                worst = std::max(worst, momentum_relation_residual(act, x, v, i));
        }
        CHECK(worst <= 1e-12);
        LieAlgebraAction s1 = circle_on_r2();
        CHECK(momentum_relation_residual(s1, Vec::Zero(2), Vec::Ones(2), 0) == 0.0);
    }

    TEST_CASE("equivariance")
    {
        Rng rng(22);
        IMat w = random_weights(rng, 2, 3);
        CompactGroupRep rep(TorusRep{w});
        LieAlgebraAction act = rep.lie_algebra_action(make_complex_model(3));
        for (const Mat& g : rep.sample_elements(rng, 20))
        {
            Vec x = random_normal(rng, 6);
            CHECK(group_equivariance_residual(act, g, x) <= 1e-10);
            // Phase rotations preserve |z_j|^2, so J(g x) = J(x) exactly.
            CHECK((momentum(act, g * x) - momentum(act, x)).norm() <= 1e-12);
        }
        CHECK(group_equivariance_residual(act, rep.sample_elements(rng, 1)[0], Vec::Zero(6)) == 0.0);

        MatrixGroupRep su2 = su2_on_c2();
        CompactGroupRep srep(su2);
        // Structure constants of i sigma_k / 2 are -epsilon_ijk.
        const auto& c = *su2.algebra.structure_constants();
        CHECK(c[2](0, 1) == doctest::Approx(-1.0));
        CHECK(c[0](1, 2) == doctest::Approx(-1.0));
        CHECK(c[1](0, 2) == doctest::Approx(1.0));
        double worst_inf = 0.0, worst_grp = 0.0;
        auto gs = srep.sample_elements(rng, 100);
        for (const Mat& g : gs)
        {
            Vec x = random_normal(rng, 4);
            worst_inf = std::max(worst_inf, *infinitesimal_equivariance_residual(su2.algebra, x));
            worst_grp = std::max(worst_grp, group_equivariance_residual(su2.algebra, g, x));
        }
        CHECK(worst_inf <= 1e-10);
        CHECK(worst_grp <= 1e-10);

        LieAlgebraAction nosc(make_standard(1), circle_on_r2().generators());
        CHECK_FALSE(infinitesimal_equivariance_residual(nosc, Vec::Ones(2)).has_value());
    }

    TEST_CASE("stabilizers")
    {
        IMat w(1, 2);
        w << 2, 3;
        CompactGroupRep t(TorusRep{w});
        StabilizerDescriptor s0 = stabilizer(t, Vec::Zero(4));
        CHECK(s0.full_group);
        CHECK(s0.dimension == 1);

        Vec z(4);
        z << 0.7, 0.1, 0.0, 0.0;
        StabilizerDescriptor s = stabilizer(t, z);
        CHECK(s.dimension == 0);
        CHECK(s.components == 2);  // {t : 2t in Z}
        for (const Mat& g : stabilizer_elements(t, s, 4))
            CHECK((g * z - z).norm() < 1e-12);
        z << 0.7, 0.1, 0.2, 0.0;
        CHECK(stabilizer(t, z).components == 1);

        CompactGroupRep z2(FiniteGroup({Mat::Identity(2, 2), -Mat::Identity(2, 2)}));
        CHECK(stabilizer(z2, Vec::Zero(2)).full_group);
        StabilizerDescriptor sf = stabilizer(z2, Vec::Ones(2));
        CHECK(sf.finite_elements.size() == 1);
        CHECK(stabilizer(z2, Vec::Ones(2)).orbit_type == stabilizer(z2, -Vec::Ones(2)).orbit_type);

        CompactGroupRep su2(su2_on_c2());
        StabilizerDescriptor sm = stabilizer(su2, (Vec(4) << 1, 0, 0, 0).finished());
        CHECK(sm.dimension == 0);
        CHECK(stabilizer(su2, Vec::Zero(4)).full_group);
    }

    TEST_CASE("torus orbit types are conjugation-invariant keys")
    {
        IMat w(2, 3);
        w << 1, 0, 1, 0, 1, 1;
        CompactGroupRep t(TorusRep{w});
        Rng rng(23);
        Vec z = random_normal(rng, 6);
        z.segment(4, 2).setZero();
        std::string key = stabilizer(t, z).orbit_type;
        for (const Mat& g : t.sample_elements(rng, 10))
            CHECK(stabilizer(t, g * z).orbit_type == key);
    }

    TEST_CASE("bifurcation lemma weak form at random points")
    {
        Rng rng(24);
        for (int trial = 0; trial < 30; ++trial)
        {
            IMat w = random_weights(rng, 2, 3);
            LieAlgebraAction act(make_complex_model(3), torus_generators(w));
            Vec x = random_normal(rng, 6);
            if (trial % 3 == 0)
                x.segment(0, 2).setZero();
            Mat kerdj = null_space(momentum_jacobian(act, x), Eigen::Index(6));
            Subspace orbit = Subspace::span(act.orbit_matrix(x));
            CHECK(projector_distance(kerdj, symplectic_orthogonal(act.space(), orbit).basis()) <= 1e-8);
        }
    }

    TEST_CASE("noether drift along invariant flows")
    {
        LieAlgebraAction s1 = circle_on_r2();
        Vec x0(2);
        x0 << 1, 0;
        HamiltonianSystem osc{[](const Vec& x) { return 0.5 * x.squaredNorm(); }, [](const Vec& x) { return x; }};
        FlowResult r = hamiltonian_flow_noether(s1, osc, x0, 10.0, 1e-3);
        CHECK(r.max_drift <= 1e-8);
        // Exact flow is a rotation by angle t (X_h = omega^{-1} x).
        Vec exact(2);
        exact << std::cos(10.0), -std::sin(10.0);
        Vec expected = matrix_exp(10.0 * s1.space().omega().inverse()) * x0;
        CHECK((r.final_state - expected).norm() < 1e-9);
        CHECK(std::abs(std::abs(r.final_state(0)) - std::abs(exact(0))) < 1e-9);

        HamiltonianSystem flat{[](const Vec&) { return 3.0; }, nullptr};
        FlowResult rc = hamiltonian_flow_noether(s1, flat, x0, 1.0, 1e-3);
        CHECK((rc.final_state - x0).norm() == 0.0);
        CHECK(rc.max_drift == 0.0);

        HamiltonianSystem quartic{[](const Vec& x) { return 0.25 * std::pow(x.squaredNorm(), 2); }, nullptr};
        FlowResult rq = hamiltonian_flow_noether(s1, quartic, x0, 10.0, 1e-3);
        CHECK(rq.max_drift <= 1e-6);
        CHECK_FALSE(rq.diverged);
    }

    TEST_CASE("infinitesimally non-symplectic generators are rejected")
    {
        CHECK_THROWS_AS(LieAlgebraAction(make_standard(1), {Mat::Identity(2, 2)}), InputError);
    }
}
