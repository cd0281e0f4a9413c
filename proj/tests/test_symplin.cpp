#include "doctest.h"

#include <cmath>

#include "momenta/symplin.hpp"
#include "test_support.hpp"

using namespace momenta;
using namespace momenta::testing;

namespace {

// Coordinates of make_standard(2): (q1, q2, p1, p2).
Vec std_vec(double q1, double q2, double p1, double p2)
{
    return (Vec(4) << q1, q2, p1, p2).finished();
}

Mat cols(std::initializer_list<Vec> vs)
{
    Mat m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
    Eigen::Index c = 0;
    for (const Vec& v : vs)
        m.col(c++) = v;
    return m;
}

Subspace random_subspace(Rng& rng, Eigen::Index n, Eigen::Index k)
{
    return Subspace(n, random_normal(rng, n, k));
}

}  // namespace

TEST_SUITE("symplin")
{
    TEST_CASE("make_standard block form")
    {
        SymplecticSpace s1 = make_standard(1);
        Mat expect(2, 2);
        expect << 0, 1, -1, 0;
        CHECK(s1.omega() == expect);
        SymplecticSpace s2 = make_standard(2);
        CHECK(numerical_rank(s2.omega()) == 4);
        Vec q1 = Vec::Unit(2, 0), p1 = Vec::Unit(2, 1);
        CHECK(s1.form(q1, p1) == 1.0);
        CHECK(s1.form(q1, q1) == 0.0);
        CHECK_THROWS_AS(make_standard(0), InputError);
    }

    TEST_CASE("invalid spaces are rejected")
    {
        CHECK_THROWS_AS(SymplecticSpace(Mat::Zero(3, 3)), InputError);
        CHECK_THROWS_AS(SymplecticSpace(Mat::Identity(2, 2)), InputError);
        CHECK_THROWS_AS(SymplecticSpace(Mat::Zero(2, 2)), InputError);
        CHECK_THROWS_AS(Subspace(4, cols({std_vec(1, 0, 0, 0), std_vec(2, 0, 0, 0)})), InputError);
    }

    TEST_CASE("symplectic orthogonal examples")
    {
        SymplecticSpace s = make_standard(2);
        Subspace v(4, cols({std_vec(1, 0, 0, 0)}));
        Subspace vo = symplectic_orthogonal(s, v);
        Subspace expect(4, cols({std_vec(1, 0, 0, 0), std_vec(0, 1, 0, 0), std_vec(0, 0, 0, 1)}));
        CHECK(vo.equals(expect));

        CHECK(symplectic_orthogonal(s, Subspace::full(4)).dim() == 0);

        // Independent oracle: LU kernel of V^T omega.
        Subspace w(4, cols({std_vec(1, 0, 0, 1), std_vec(0, 1, 0, 0)}));
        Mat oracle = (w.basis().transpose() * s.omega()).fullPivLu().kernel();
        Subspace wo = symplectic_orthogonal(s, w);
        CHECK(wo.dim() == 2);
        CHECK(projector_distance(wo.basis(), oracle) < 1e-10);
    }

    TEST_CASE("double orthogonal is the identity on subspaces")
    {
        SymplecticSpace s = make_standard(2);
        CHECK(double_orthogonal_check(s, Subspace(4, cols({std_vec(1, 0, 0, 0)}))).distance < 1e-12);
        CHECK(double_orthogonal_check(s, Subspace::zero(4)).closed);

        Rng rng(11);
        std::uniform_int_distribution<int> half(1, 10);
        for (int trial = 0; trial < 200; ++trial)
        {
            int n = half(rng);
            SymplecticSpace sp(random_symplectic_form(rng, n));
            std::uniform_int_distribution<int> kd(0, 2 * n);
            Subspace v = random_subspace(rng, 2 * n, kd(rng));
            auto r = double_orthogonal_check(sp, v);
            CHECK(r.distance <= 1e-8);
            CHECK(v.dim() + symplectic_orthogonal(sp, v).dim() == 2 * n);
        }
    }

    TEST_CASE("anti-monotony and sums of orthogonals")
    {
        Rng rng(12);
        for (int trial = 0; trial < 50; ++trial)
        {
            SymplecticSpace sp(random_symplectic_form(rng, 3));
            Mat b = random_normal(rng, 6, 4);
            Subspace v1(6, b.leftCols(2)), v2(6, b);
            CHECK(symplectic_orthogonal(sp, v1).contains(symplectic_orthogonal(sp, v2)));

            Subspace a(6, random_normal(rng, 6, 2)), c(6, random_normal(rng, 6, 1));
            Subspace sum = Subspace::span(span_sum(a.basis(), c.basis()));
            Mat inter = span_intersection(symplectic_orthogonal(sp, a).basis(), symplectic_orthogonal(sp, c).basis());
            CHECK(projector_distance(symplectic_orthogonal(sp, sum).basis(), inter) < 1e-8);
        }
    }

    TEST_CASE("symplectic subspace classification")
    {
        SymplecticSpace s = make_standard(2);
        CHECK(is_symplectic_subspace(s, Subspace(4, cols({std_vec(1, 0, 0, 0), std_vec(0, 0, 1, 0)}))));
        CHECK_FALSE(is_symplectic_subspace(s, Subspace(4, cols({std_vec(1, 0, 0, 0), std_vec(0, 1, 0, 0)}))));
        // omega(q1 + p2, q2) = -1, so the restricted 2x2 form has rank 2.
        Subspace w(4, cols({std_vec(1, 0, 0, 1), std_vec(0, 1, 0, 0)}));
        Mat restricted = w.basis().transpose() * s.omega() * w.basis();
        CHECK(std::abs(restricted(0, 1)) == doctest::Approx(1.0));
        CHECK(is_symplectic_subspace(s, w));
    }

    TEST_CASE("three characterizations agree on random subspaces")
    {
        Rng rng(13);
        for (int trial = 0; trial < 200; ++trial)
        {
            SymplecticSpace sp(random_symplectic_form(rng, 3));
            std::uniform_int_distribution<int> kd(0, 6);
            Subspace v = random_subspace(rng, 6, kd(rng));
            if (trial % 4 == 0)
            {
                // Isotropic: span of vectors inside a Lagrangian.
                Mat s = darboux_basis(sp);
                v = Subspace(6, s.leftCols(1 + trial % 3));
            }
            auto r = symplectic_subspace_routes(sp, v);
            CHECK(r.restricted_rank_full == r.meets_orthogonal_trivially);
            CHECK(r.restricted_rank_full == r.gamma_surjective);
            if (r.restricted_rank_full)
            {
                Mat both(6, 6);
                Subspace vo = symplectic_orthogonal(sp, v);
                both << v.basis(), vo.basis();
                CHECK(numerical_rank(both) == 6);
            }
            if (v.dim() % 2 == 1)
                CHECK_FALSE(r.restricted_rank_full);
        }
    }

    TEST_CASE("compatible complex structure")
    {
        SymplecticSpace s = make_standard(2);
        ComplexStructure j = compatible_complex_structure(s);
        // Oracle: omega J = I has the unique solution J = omega^{-1}.
        Mat oracle = s.omega().fullPivLu().solve(Mat::Identity(4, 4));
        CHECK((j.j - oracle).norm() < 1e-12);
        CHECK((j.j + s.omega()).norm() < 1e-12);

        Rng rng(14);
        for (int trial = 0; trial < 5; ++trial)
        {
            SymplecticSpace sp(random_symplectic_form(rng, 3), random_spd(rng, 6));
            ComplexStructure cj = compatible_complex_structure(sp);
            CHECK((cj.j * cj.j + Mat::Identity(6, 6)).norm() < 1e-10);
            Mat g = associated_metric(sp, cj);
            CHECK(Eigen::LLT<Mat>(g).info() == Eigen::Success);
            for (int k = 0; k < 20; ++k)
            {
                std::uniform_int_distribution<int> kd(1, 5);
                Subspace v = random_subspace(rng, 6, kd(rng));
                Mat jperp = cj.j * metric_complement(v.basis(), g);
                CHECK(projector_distance(symplectic_orthogonal(sp, v).basis(), jperp) < 1e-8);
            }
        }
    }

    TEST_CASE("darboux basis")
    {
        Mat w(2, 2);
        w << 0, 2, -2, 0;
        SymplecticSpace s(w);
        Mat b = darboux_basis(s);
        CHECK((b.transpose() * w * b - standard_omega(1)).norm() < 1e-12);

        Rng rng(15);
        for (int trial = 0; trial < 20; ++trial)
        {
            SymplecticSpace sp(random_symplectic_form(rng, 3));
            Mat d = darboux_basis(sp);
            CHECK((d.transpose() * sp.omega() * d - standard_omega(3)).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }

    TEST_CASE("fixed point splitting examples")
    {
        SymplecticSpace r2 = make_standard(1);
        CompactGroupRep z2(FiniteGroup({Mat::Identity(2, 2), -Mat::Identity(2, 2)}));
        auto sp = fixed_point_splitting(r2, z2);
        CHECK(sp.fixed.dim() == 0);
        CHECK(sp.complement.dim() == 2);

        // Circle rotating the (q1, p1) plane of standard R^4.
        SymplecticSpace r4 = make_standard(2);
        Mat a = Mat::Zero(4, 4);
        a(2, 0) = 1.0;
        a(0, 2) = -1.0;
        LieAlgebraAction alg(r4, {a}, StructureConstants{Mat::Zero(1, 1)});
        CompactGroupRep circle(MatrixGroupRep{alg, {Mat::Identity(4, 4)}});
        auto sc = fixed_point_splitting(r4, circle);
        Subspace expect_fixed(4, cols({std_vec(0, 1, 0, 0), std_vec(0, 0, 0, 1)}));
        Subspace expect_comp(4, cols({std_vec(1, 0, 0, 0), std_vec(0, 0, 1, 0)}));
        CHECK(sc.fixed.equals(expect_fixed));
        CHECK(sc.complement.equals(expect_comp));
        CHECK(sc.projector_sum_residual < 1e-8);

        // Same circle as a torus weight matrix on the complex model.
        SymplecticSpace c2 = make_complex_model(2);
        CompactGroupRep torus(TorusRep{(IMat(1, 2) << 1, 0).finished()});
        auto st = fixed_point_splitting(c2, torus);
        CHECK(st.fixed.dim() == 2);
        CHECK(st.invariance_residual < 1e-12);

        CompactGroupRep trivial(FiniteGroup({Mat::Identity(4, 4)}));
        auto s0 = fixed_point_splitting(r4, trivial);
        CHECK(s0.fixed.dim() == 4);
        CHECK(s0.complement.dim() == 0);
    }

    TEST_CASE("non-symplectic representation rejected")
    {
        SymplecticSpace r2 = make_standard(1);
        Mat flip(2, 2);
        flip << 1, 0, 0, -1;
        CompactGroupRep bad(FiniteGroup({Mat::Identity(2, 2), flip}));
        CHECK_THROWS_AS(fixed_point_splitting(r2, bad), InputError);
    }

    TEST_CASE("random finite reps split symplectically")
    {
        Rng rng(16);
        for (int trial = 0; trial < 10; ++trial)
        {
            SymplecticSpace c3 = make_complex_model(3);
            Mat conj = random_symplectic_matrix(rng, c3.omega());
            std::uniform_int_distribution<int> mult(0, 2);
            std::vector<int> mults = {mult(rng), mult(rng), 0};
            CompactGroupRep rep(cyclic_group(3 + trial % 3, mults, conj));
            auto s = fixed_point_splitting(c3, rep);
            CHECK(s.projector_sum_residual <= 1e-8);
            CHECK(s.invariance_residual <= 1e-8);
            CHECK(is_symplectic_subspace(c3, s.fixed));
            CHECK(s.fixed.dim() >= 2);
        }
        // No fixed vectors: the group average vanishes up to rounding.
        SymplecticSpace c3 = make_complex_model(3);
        CompactGroupRep free_rep(cyclic_group(4, {1, 1, 1}, random_symplectic_matrix(rng, c3.omega())));
        auto s = fixed_point_splitting(c3, free_rep);
        CHECK(s.fixed.dim() == 0);
        CHECK(s.complement.dim() == 6);
    }
}
