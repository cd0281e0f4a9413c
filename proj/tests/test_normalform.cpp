#include "doctest.h"

#include <cmath>

#include "momenta/normalform.hpp"
#include "momenta/symplin.hpp"

using namespace momenta;

namespace {

MGSData toy_mgs(std::function<double(const Vec&)> factor, bool with_rotation,
                std::function<Vec(const Vec&)> j_sing)
{
    Mat w0(2, 2);
    w0 << 0, 1, -1, 0;
    MGSData m;
    m.ker_dim = 2;
    m.omega_bar = [w0, factor](const Vec& x) { return Mat(factor(x) * w0); };
    m.j_sing = std::move(j_sing);
    if (with_rotation)
        m.h_action.push_back(-w0);
    m.radius = 0.5;
    return m;
}

}  // namespace

TEST_SUITE("normalform")
{
    TEST_CASE("split_jacobian examples")
    {
        Mat t(2, 2);
        t << 1, 0, 0, 0;
        LinearSplitting s = split_jacobian(t);
        CHECK(projector_distance(s.ker, Vec::Unit(2, 1)) < 1e-14);
        CHECK(projector_distance(s.coimg, Vec::Unit(2, 0)) < 1e-14);
        CHECK(projector_distance(s.img, Vec::Unit(2, 0)) < 1e-14);
        CHECK(projector_distance(s.coker, Vec::Unit(2, 1)) < 1e-14);
        CHECK(std::abs(s.t_hat(0, 0)) == doctest::Approx(1.0));

        LinearSplitting z = split_jacobian(Mat::Zero(2, 2));
        CHECK(z.ker.cols() == 2);
        CHECK(z.img.cols() == 0);

        Rng rng(30);
        Mat r = random_normal(rng, 5, 2) * random_normal(rng, 2, 3);
        LinearSplitting rs = split_jacobian(r);
        CHECK(rs.ker.cols() == 1);
        CHECK(rs.img.cols() == 2);
        CHECK(rs.coker.cols() == 3);
        CHECK((r * rs.ker).norm() < 1e-10);
        // T_hat is the restriction of T in the chosen bases.
        CHECK((rs.img * rs.t_hat - r * rs.coimg).norm() < 1e-10);
        Mat dom(3, 3);
        dom << rs.ker, rs.coimg;
        CHECK((dom * dom.transpose() - Mat::Identity(3, 3)).norm() < 1e-10);
    }

    TEST_CASE("ill-separated rank is flagged")
    {
        Mat t = Mat::Zero(2, 2);
        t(0, 0) = 1.0;
        t(1, 1) = 1e-12;
        LinearSplitting s = split_jacobian(t, 1e-8);
        CHECK(s.ill_separated == false);
        t(1, 1) = 2e-8;
        LinearSplitting s2 = split_jacobian(t, 1.5e-8);
        CHECK(s2.ill_separated);
    }

    TEST_CASE("parabola: psi inverse matches the closed form")
    {
        SmoothMap f = demo_model("parabola");
        auto nf = deform_domain(f, split_jacobian(f.jacobian_at(f.base_point)));
        const auto& sp = nf->splitting();
        // Closed form: the point p with p1 = K a and p2 + p1^2 = I That b.
        for (double a : {0.3, -0.2})
            for (double b : {0.1, -0.4})
            {
                Vec y(2);
                y << a, b;
                Vec p = nf->embed(nf->psi_inverse_or_throw(y));
                double p1 = sp.ker(0, 0) * a;
                double p2 = (sp.img * sp.t_hat)(0, 0) * b - p1 * p1;
                CHECK(p(0) == doctest::Approx(p1).epsilon(1e-12));
                CHECK(p(1) == doctest::Approx(p2).epsilon(1e-12));
            }
        Rng rng(31);
        auto r = compute_normal_form(f, rng);
        CHECK(r.report.pass());
        CHECK(r.data->coker_dim() == 0);
    }

    TEST_CASE("identity map gives identity chart")
    {
        SmoothMap f = demo_model("identity");
        auto nf = deform_domain(f, split_jacobian(f.jacobian_at(f.base_point)));
        Vec x(2);
        x << 0.2, -0.7;
        CHECK((nf->psi(x) - x).norm() < 1e-14);
    }

    TEST_CASE("fold: singular part is x1^2")
    {
        SmoothMap f = demo_model("fold");
        auto nf = deform_domain(f, split_jacobian(f.jacobian_at(f.base_point)));
        REQUIRE(nf->ker_dim() == 1);
        REQUIRE(nf->coker_dim() == 1);
        for (double a : {0.1, -0.3, 0.45})
        {
            Vec x(2);
            x << a, 0.0;
            CHECK(nf->f_sing(x)(0) == doctest::Approx(a * a).epsilon(1e-12));
            x << 0.0, a;
            CHECK(nf->f_sing(x)(0) == 0.0);
        }
        // psi is the identity in chart coordinates since pr_img f = x2.
        Vec x(2);
        x << 0.3, 0.2;
        CHECK((nf->psi(x) - x).norm() < 1e-14);
        Vec y(2);
        y << 0.1, 0.25;
        CHECK((nf->phi(y) - y).norm() < 1e-14);
    }

    TEST_CASE("mixed: singular part vanishes on coimg")
    {
        SmoothMap f = demo_model("mixed");
        Rng rng(32);
        auto r = compute_normal_form(f, rng);
        CHECK(r.report.pass());
        Vec x(2);
        x << 0.2, 0.0;
        CHECK(r.data->f_sing(x)(0) == doctest::Approx(0.04).epsilon(1e-12));
    }

    TEST_CASE("every demo model satisfies the normal form contract")
    {
        Rng rng(33);
        for (const auto& name : demo_model_names())
        {
            CAPTURE(name);
            auto r = compute_normal_form(demo_model(name), rng);
            CHECK(r.report.get("f_sing_vanishes_on_coimg").max_residual <= 1e-8);
            CHECK(r.report.get("f_sing_derivative_at_origin").max_residual <= 1e-6);
            CHECK(r.report.get("chart_identity").max_residual <= 1e-6);
            CHECK(r.report.pass());
            CHECK(r.data->validity_radius() > 0.0);
        }
    }

    TEST_CASE("cubic curve: end-to-end residual on coimg")
    {
        SmoothMap f = demo_model("cubic");
        auto nf = deform_domain(f, split_jacobian(f.jacobian_at(f.base_point)));
        CHECK(nf->ker_dim() == 0);
        for (double b : {0.1, -0.3})
        {
            Vec x(1);
            x << b;
            Vec u = nf->embed(nf->psi_inverse_or_throw(x));
            Vec z = nf->phi_inverse(nf->target_coords(nf->shifted(u)));
            CHECK(std::abs(z(0)) < 1e-12);
        }
    }

    TEST_CASE("MGS at the origin for weights (1,-1)")
    {
        CompactGroupRep rep(TorusRep{(IMat(1, 2) << 1, -1).finished()});
        LieAlgebraAction act = rep.lie_algebra_action(make_complex_model(2));
        Rng rng(34);
        MGSData mgs = assemble_mgs(act, rep, Vec::Zero(4), rng);
        CHECK(mgs.ker_dim == 4);
        CHECK(mgs.strong);
        CHECK(mgs.report.get("momentum_identity").max_residual <= 1e-6);
        CHECK(mgs.report.get("quadratic_identity").max_residual <= 1e-8);
        const Mat& k = mgs.normal_form->splitting().ker;
        // omega_bar equals omega in ker coordinates.
        CHECK((k * mgs.omega_bar(Vec::Zero(4)) * k.transpose() - act.space().omega()).norm() < 1e-12);
        CHECK(mgs.report.pass());
    }

    TEST_CASE("MGS at a free zero-level point")
    {
        CompactGroupRep rep(TorusRep{(IMat(1, 2) << 1, -1).finished()});
        LieAlgebraAction act = rep.lie_algebra_action(make_complex_model(2));
        Rng rng(35);
        Vec m(4);
        m << 1, 0, 1, 0;
        m /= std::sqrt(2.0);
        MGSData mgs = assemble_mgs(act, rep, m, rng);
        CHECK(mgs.ker_dim == 2);
        CHECK(mgs.h_action.empty());
        CHECK(min_singular_value(mgs.omega_bar(Vec::Zero(2))) > 1e-3);
        CHECK(mgs.report.pass());
    }

    TEST_CASE("strong upgrade of a radially scaled form")
    {
        auto factor = [](const Vec& x) { return 1.0 + x.squaredNorm(); };
        auto js = [](const Vec& x) {
            double r2 = x.squaredNorm();
            return Vec((Vec(1) << 0.5 * r2 + 0.25 * r2 * r2).finished());
        };
        MGSData toy = toy_mgs(factor, true, js);
        Rng rng(36);
        VerificationReport before = verify_mgs(toy, rng, 32);
        CHECK(before.get("momentum_identity").max_residual <= 1e-6);
        MGSData up = strong_upgrade(toy, rng, 8);
        CHECK(up.strong);
        CHECK(up.report.get("quadratic_identity").max_residual <= 1e-6);
        Vec x(2);
        x << 0.3, -0.1;
        CHECK(up.j_sing(x)(0) == doctest::Approx(0.5 * x.squaredNorm()).epsilon(1e-8));
    }

    TEST_CASE("strong upgrade without symmetry pulls back to a constant form")
    {
        auto factor = [](const Vec& x) { return 1.0 + x(0) * x(0); };
        MGSData toy = toy_mgs(factor, false, [](const Vec&) { return Vec(0); });
        Rng rng(37);
        MGSData up = strong_upgrade(toy, rng, 8);
        CHECK(up.report.get("pullback_constant").max_residual <= 1e-6);
        CHECK(up.strong);
    }

    TEST_CASE("strong upgrade of constant data is the identity")
    {
        auto js = [](const Vec& x) { return Vec((Vec(1) << 0.5 * x.squaredNorm()).finished()); };
        MGSData toy = toy_mgs([](const Vec&) { return 1.0; }, true, js);
        Rng rng(38);
        MGSData up = strong_upgrade(toy, rng, 16);
        CHECK(up.strong);
        Vec x(2);
        x << 0.2, 0.1;
        CHECK(up.j_sing(x)(0) == toy.j_sing(x)(0));
    }

    TEST_CASE("strong upgrade refuses degenerate forms")
    {
        MGSData toy = toy_mgs([](const Vec& x) { return 1.0 - 10.0 * x.squaredNorm(); }, false,
                              [](const Vec&) { return Vec(0); });
        Rng rng(39);
        CHECK_THROWS_AS(strong_upgrade(toy, rng, 64), NumericalError);
    }

    TEST_CASE("approximation property for circle actions")
    {
        Rng rng(40);
        CompactGroupRep rep(TorusRep{(IMat(1, 2) << 1, -1).finished()});
        LieAlgebraAction act = rep.lie_algebra_action(make_complex_model(2));
        MGSData mgs = assemble_mgs(act, rep, Vec::Zero(4), rng, 16);
        ApproximationReport ar = approximation_property_check(mgs, rep, {}, rng, 40);
        CHECK(ar.consistent());
        REQUIRE(ar.types.size() == 2);
        for (const auto& t : ar.types)
            CHECK(t.status == "found");

        CompactGroupRep rep11(TorusRep{(IMat(1, 2) << 1, 1).finished()});
        LieAlgebraAction act11 = rep11.lie_algebra_action(make_complex_model(2));
        MGSData m11 = assemble_mgs(act11, rep11, Vec::Zero(4), rng, 16);
        ApproximationReport a11 = approximation_property_check(m11, rep11, {}, rng, 40);
        CHECK(a11.types.size() == 1);
        CHECK(a11.consistent());
    }
}
