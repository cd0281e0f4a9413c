#include "momenta/samplers.hpp"

#include <cmath>
#include <numbers>

namespace momenta {

Mat random_symplectic_form(Rng& rng, int n)
{
    // A^T J A with J standard and A well-conditioned.
    Mat a = Mat::Identity(2 * n, 2 * n) + 0.3 * random_normal(rng, 2 * n, 2 * n);
    Mat j = make_standard(n).omega();
    Mat w = a.transpose() * j * a;
    return 0.5 * (w - w.transpose());
}

Mat random_spd(Rng& rng, Eigen::Index n)
{
    Mat a = random_normal(rng, n, n);
    return a * a.transpose() + static_cast<double>(n) * Mat::Identity(n, n);
}

Mat random_symplectic_matrix(Rng& rng, const Mat& omega, double scale)
{
    const Eigen::Index n = omega.rows();
    Mat s = random_normal(rng, n, n);
    s = (0.5 * (s + s.transpose())).eval();
    return matrix_exp(scale * omega.inverse() * s);
}

FiniteGroup cyclic_group(int order, const std::vector<int>& pair_multipliers, const Mat& conj)
{
    const Eigen::Index n = static_cast<Eigen::Index>(pair_multipliers.size());
    IMat w(1, n);
    for (Eigen::Index j = 0; j < n; ++j)
        w(0, j) = pair_multipliers[static_cast<std::size_t>(j)];
    std::vector<Mat> elems;
    Mat cinv = conj.inverse();
    for (int k = 0; k < order; ++k)
    {
        Vec t(1);
        t(0) = static_cast<double>(k) / order;
        Mat g = conj * torus_element(w, t) * cinv;
        // Snap the identity exactly so the group validator finds it.
        if (k == 0)
            g = Mat::Identity(2 * n, 2 * n);
        elems.push_back(g);
    }
    return FiniteGroup(elems);
}

IMat random_weights(Rng& rng, Eigen::Index k, Eigen::Index n, int bound)
{
    std::uniform_int_distribution<int> d(-bound, bound);
    IMat w(k, n);
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) = d(rng);
    return w;
}

}  // namespace momenta
