#include "doctest.h"

#include "momenta/lattice.hpp"
#include "momenta/linalg.hpp"

using namespace momenta;

TEST_SUITE("linalg")
{
    TEST_CASE("null space and rank agree with LU kernel")
    {
        Rng rng(1);
        for (int trial = 0; trial < 20; ++trial)
        {
            Mat a = random_normal(rng, 4, 2) * random_normal(rng, 2, 7);
            Mat ns = null_space(a);
            CHECK(ns.cols() == 5);
            CHECK(numerical_rank(a) == 2);
            CHECK((a * ns).norm() < 1e-10);
            Mat lu_kernel = a.fullPivLu().kernel();
            CHECK(projector_distance(ns, lu_kernel) < 1e-8);
        }
    }

    TEST_CASE("span intersection of coordinate planes")
    {
        Mat a = Mat::Identity(4, 4).leftCols(2);
        Mat b = Mat::Identity(4, 4).middleCols(1, 2);
        Mat i = span_intersection(a, b);
        REQUIRE(i.cols() == 1);
        CHECK(std::abs(std::abs(i(1, 0)) - 1.0) < 1e-12);
    }

    TEST_CASE("nnls matches the known non-negative solution")
    {
        Mat a(3, 2);
        a << 1, 0, 0, 1, 1, 1;
        Vec b(3);
        b << 1, -1, 0;
        Vec x = nnls(a, b);
        // Unconstrained solution has x2 < 0; the constrained optimum is x = (0.5, 0).
        CHECK(x(0) == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(x(1) == doctest::Approx(0.0));
    }

    TEST_CASE("hermite normal form is canonical for equal lattices")
    {
        IMat a(2, 2), b(2, 2);
        a << 2, 0, 0, 3;
        b << 2, 3, 2, 6;  // same lattice: rows (2,3) - (2,0) = (0,3), (2,6) - 2*(0,3) = (2,0)
        CHECK(hermite_normal_form(a) == hermite_normal_form(b));
        IVec w(2);
        w << 4, 9;
        CHECK(in_row_lattice(hermite_normal_form(a), w));
        w << 1, 0;
        CHECK_FALSE(in_row_lattice(hermite_normal_form(a), w));
    }

    TEST_CASE("smith normal form reconstructs the input")
    {
        Rng rng(3);
        std::uniform_int_distribution<int> d(-5, 5);
        for (int trial = 0; trial < 50; ++trial)
        {
            IMat a(3, 4);
            for (Eigen::Index i = 0; i < a.size(); ++i)
                a(i) = d(rng);
            SmithForm s = smith_normal_form(a);
            IMat diag = IMat::Zero(3, 4);
            for (std::size_t i = 0; i < s.diagonal.size(); ++i)
                diag(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = s.diagonal[i];
            CHECK(s.u * a * s.v == diag);
            CHECK(std::llabs(static_cast<long long>(std::llround(s.u.cast<double>().determinant()))) == 1);
            CHECK(std::llabs(static_cast<long long>(std::llround(s.v.cast<double>().determinant()))) == 1);
            for (std::size_t i = 1; i < s.diagonal.size(); ++i)
                CHECK(s.diagonal[i] % s.diagonal[i - 1] == 0);
        }
    }
}
