#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>

#include "momenta/gauge2d.hpp"

using namespace momenta;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Coefficient matrix C(v, e) of a bilinear form B(phi, alpha), exact for integer data.
Mat bilinear_coefficients(const SurfaceMesh& mesh, const std::function<double(const Vec&, const Vec&)>& b)
{
    Mat c(mesh.n_vertices(), mesh.n_edges());
    for (Eigen::Index v = 0; v < mesh.n_vertices(); ++v)
        for (Eigen::Index e = 0; e < mesh.n_edges(); ++e)
            c(v, e) = b(Vec::Unit(mesh.n_vertices(), v), Vec::Unit(mesh.n_edges(), e));
    return c;
}

}  // namespace

TEST_SUITE("gauge2d")
{
    TEST_CASE("genus surfaces are closed oriented triangulations")
    {
        for (int g = 1; g <= 3; ++g)
        {
            CAPTURE(g);
            SurfaceMesh m = build_genus_surface(g);
            CHECK(m.euler_characteristic() == 2 - 2 * g);
            CHECK(m.genus() == g);
            // B1 B2 = 0 exactly.
            SpMat prod = m.boundary1() * m.boundary2();
            CHECK(Mat(prod).cwiseAbs().maxCoeff() == 0.0);
            // Every edge in exactly two faces with opposite induced orientation.
            Vec ones = Vec::Ones(m.n_faces());
            CHECK((m.boundary2() * ones).cwiseAbs().maxCoeff() == 0.0);
            Vec incid = m.boundary2().cwiseAbs() * ones;
            CHECK((incid.array() == 2.0).all());
        }
        CHECK_THROWS_AS(build_genus_surface(0), InputError);
        // Deterministic output.
        CHECK(build_genus_surface(2).to_json() == build_genus_surface(2).to_json());
    }

    TEST_CASE("mesh json round trip and rejection of open surfaces")
    {
        SurfaceMesh m = build_genus_surface(1, 4);
        SurfaceMesh back = SurfaceMesh::from_json(m.to_json());
        CHECK(back.n_faces() == m.n_faces());
        CHECK(back.n_edges() == m.n_edges());
        CHECK_THROWS_AS(SurfaceMesh(3, {{0, 1, 2}}), InputError);
        CHECK_THROWS_AS(SurfaceMesh::from_json("{\"vertices\": 3}"), InputError);
        // Tetrahedron boundary is a sphere: closed and oriented, genus 0.
        SurfaceMesh tet(4, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}});
        CHECK(tet.genus() == 0);
    }

    TEST_CASE("wedge form basics")
    {
        SurfaceMesh m = build_genus_surface(1);
        Rng rng(60);
        for (int t = 0; t < 10; ++t)
        {
            Vec a = random_normal(rng, m.n_edges()), b = random_normal(rng, m.n_edges());
            CHECK(wedge_form(m, a, a) == 0.0);
            CHECK(wedge_form(m, a, b) == doctest::Approx(-wedge_form(m, b, a)).epsilon(1e-12));
            Vec p = coboundary0(m, random_normal(rng, m.n_vertices()));
            Vec q = coboundary0(m, random_normal(rng, m.n_vertices()));
            CHECK(std::abs(wedge_form(m, p, q)) <= 1e-10);
        }
        CHECK_THROWS_AS(wedge_form(m, Vec::Zero(3), Vec::Zero(3)), InputError);
    }

    TEST_CASE("momentum identity: coefficient expansion selects the plain cup")
    {
        SurfaceMesh m = build_genus_surface(1, 4);
        // Plain cup: every coefficient of cup(-d0 phi, alpha) + kappa(-d1 alpha, phi) vanishes.
        Mat plain = bilinear_coefficients(m, [&](const Vec& phi, const Vec& alpha) {
            return cup_pairing(m, -coboundary0(m, phi), alpha) + kappa_pairing(m, -coboundary1(m, alpha), phi);
        });
        CHECK(plain.cwiseAbs().maxCoeff() == 0.0);
        // The antisymmetrized wedge leaves a nonzero exact-term residue.
        Mat anti = bilinear_coefficients(m, [&](const Vec& phi, const Vec& alpha) {
            return wedge_form(m, -coboundary0(m, phi), alpha) + kappa_pairing(m, -coboundary1(m, alpha), phi);
        });
        CHECK(anti.cwiseAbs().maxCoeff() > 0.1);

        Rng rng(61);
        for (int g = 1; g <= 3; ++g)
        {
            SurfaceMesh mg = build_genus_surface(g);
            for (int t = 0; t < 20; ++t)
                CHECK(momentum_relation_residual(mg, random_normal(rng, mg.n_vertices()),
                                                 random_normal(rng, mg.n_edges())) <= 1e-12);
        }
    }

    TEST_CASE("curvature and Chern number")
    {
        SurfaceMesh m = build_genus_surface(2);
        Rng rng(62);
        CurvatureResult zero = curvature_and_chern(m, Vec::Zero(m.n_edges()));
        CHECK(zero.chern == 0);
        CHECK(zero.curvature.cwiseAbs().maxCoeff() == 0.0);

        Vec exact = coboundary0(m, 3.0 * random_normal(rng, m.n_vertices()));
        CurvatureResult ce = curvature_and_chern(m, exact);
        CHECK(ce.chern == 0);
        CHECK(ce.curvature.cwiseAbs().maxCoeff() <= 1e-12);

        // Monopole: least-squares solve of d1 theta = sigma - 2 pi e_0.
        for (long long c : {1LL, -2LL, 3LL})
        {
            CAPTURE(c);
            Vec theta = central_ym_connection(m, c);
            CurvatureResult r = curvature_and_chern(m, theta);
            CHECK(r.chern == c);
            const double uniform = kTwoPi * static_cast<double>(c) / static_cast<double>(m.n_faces());
            CHECK((r.curvature.array() - uniform).abs().maxCoeff() <= 1e-10);
            CHECK(r.curvature.sum() == doctest::Approx(kTwoPi * static_cast<double>(c)).epsilon(1e-12));
            // Gauge invariance under large random transforms.
            for (int t = 0; t < 20; ++t)
            {
                Vec phi = 10.0 * random_normal(rng, m.n_vertices());
                CHECK(curvature_and_chern(m, gauge_action(m, theta, phi)).chern == c);
            }
            // Small perturbations keep the Chern number.
            CHECK(curvature_and_chern(m, theta + 1e-3 * random_normal(rng, m.n_edges())).chern == c);
        }
        Vec cut = Vec::Zero(m.n_edges());
        cut(0) = std::numbers::pi;
        CHECK_FALSE(curvature_and_chern(m, cut).ambiguous_faces.empty());
    }

    TEST_CASE("gauge action")
    {
        SurfaceMesh m = build_genus_surface(1);
        Rng rng(63);
        Vec theta = random_normal(rng, m.n_edges());
        CHECK((gauge_action(m, theta, Vec::Constant(m.n_vertices(), 0.7)) - theta).norm() <= 1e-14);
    }

    TEST_CASE("Hodge decomposition")
    {
        Rng rng(64);
        for (int g = 1; g <= 3; ++g)
        {
            CAPTURE(g);
            SurfaceMesh m = build_genus_surface(g);
            HodgeSolver hs(m);
            CHECK(harmonic_dimension(hs) == 2 * g);
            Vec alpha = random_normal(rng, m.n_edges());
            HodgeSplit sp = hs.split(alpha);
            CHECK(sp.orthogonality <= 1e-10);
            CHECK((sp.exact + sp.coexact + sp.harmonic - alpha).norm() <= 1e-10);
            // Harmonic: closed and coclosed.
            CHECK(coboundary1(m, sp.harmonic).norm() <= 1e-10);
            CHECK((m.boundary1() * sp.harmonic).norm() <= 1e-10);

            HodgeSplit ex = hs.split(coboundary0(m, random_normal(rng, m.n_vertices())));
            CHECK(ex.harmonic.norm() <= 1e-10);
            CHECK(ex.coexact.norm() <= 1e-10);
        }
    }

    TEST_CASE("cycle basis and intersection form")
    {
        Rng rng(65);
        for (int g = 1; g <= 3; ++g)
        {
            CAPTURE(g);
            SurfaceMesh m = build_genus_surface(g);
            HodgeSolver hs(m);
            CycleBasis cb = homology_cycle_basis(m, hs);
            REQUIRE(cb.cycles.cols() == 2 * g);
            CHECK(Mat(m.boundary1() * cb.cycles).cwiseAbs().maxCoeff() == 0.0);
            CHECK((cb.cycles.array() == cb.cycles.array().round()).all());
            CHECK((cb.intersection + cb.intersection.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(std::abs(cb.intersection.determinant()) == doctest::Approx(1.0));
            CHECK(cb.rounding_residual <= 1e-8);
            CHECK((cb.dual_harmonic.transpose() * cb.cycles - Mat::Identity(2 * g, 2 * g)).norm() <= 1e-10);

            ReducedIntersection ri = reduced_intersection_check(m, cb, rng);
            CHECK(ri.pass());
            CHECK(ri.min_singular > 1e-3);
            if (g == 1)
                CHECK(std::abs(cb.intersection(0, 1)) == 1.0);
        }
    }

    TEST_CASE("Wilson loops on flat connections")
    {
        Rng rng(66);
        SurfaceMesh m = build_genus_surface(2);
        HodgeSolver hs(m);
        CycleBasis cb = homology_cycle_basis(m, hs);
        CHECK(wilson_flat_moduli(m, Vec::Zero(m.n_edges()), cb).norm() == 0.0);

        std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
        for (int t = 0; t < 50; ++t)
        {
            Vec target(4);
            for (Eigen::Index i = 0; i < 4; ++i)
                target(i) = ang(rng);
            Vec theta = harmonic_connection(cb, target);
            Vec hol = wilson_flat_moduli(m, theta, cb);
            for (Eigen::Index i = 0; i < 4; ++i)
                CHECK(std::abs(wrap_angle(hol(i) - target(i))) <= 1e-6);
            Vec gauged = gauge_action(m, theta, 5.0 * random_normal(rng, m.n_vertices()));
            Vec hol2 = wilson_flat_moduli(m, gauged, cb);
            for (Eigen::Index i = 0; i < 4; ++i)
                CHECK(std::abs(wrap_angle(hol2(i) - hol(i))) <= 1e-10);
        }
        Vec half = harmonic_connection(cb, std::numbers::pi * Vec::Unit(4, 0));
        Vec hol = wilson_flat_moduli(m, half, cb);
        CHECK(std::abs(std::abs(hol(0)) - std::numbers::pi) <= 1e-9);
        CHECK(hol.tail(3).norm() <= 1e-9);

        CHECK_THROWS_AS(wilson_flat_moduli(m, central_ym_connection(m, 1), cb), InputError);
    }
}
