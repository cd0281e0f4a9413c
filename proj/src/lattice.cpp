#include "momenta/lattice.hpp"

#include <cstdlib>
#include <numeric>
#include <utility>

namespace momenta {

namespace {

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

}  // namespace

IMat hermite_normal_form(const IMat& input)
{
    IMat h = input;
    const Eigen::Index m = h.rows();
    const Eigen::Index n = h.cols();
    Eigen::Index pivot_row = 0;
    for (Eigen::Index col = 0; col < n && pivot_row < m; ++col)
    {
        // Euclid on the column below pivot_row until a single nonzero remains.
        while (true)
        {
            Eigen::Index best = -1;
            for (Eigen::Index i = pivot_row; i < m; ++i)
                if (h(i, col) != 0 && (best < 0 || std::llabs(h(i, col)) < std::llabs(h(best, col))))
                    best = i;
            if (best < 0)
                break;
            h.row(pivot_row).swap(h.row(best));
            bool done = true;
            for (Eigen::Index i = pivot_row + 1; i < m; ++i)
            {
                if (h(i, col) == 0)
                    continue;
                long long q = h(i, col) / h(pivot_row, col);
                h.row(i) -= q * h.row(pivot_row);
                if (h(i, col) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (h(pivot_row, col) == 0)
            continue;
        if (h(pivot_row, col) < 0)
            h.row(pivot_row) *= -1;
        for (Eigen::Index i = 0; i < pivot_row; ++i)
        {
            long long q = floor_div(h(i, col), h(pivot_row, col));
            h.row(i) -= q * h.row(pivot_row);
        }
        ++pivot_row;
    }
    return h.topRows(pivot_row);
}

SmithForm smith_normal_form(const IMat& a)
{
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    IMat d = a;
    IMat u = IMat::Identity(m, m);
    IMat v = IMat::Identity(n, n);

    Eigen::Index t = 0;
    while (t < std::min(m, n))
    {
        // Choose the smallest nonzero entry in the trailing block as pivot.
        Eigen::Index pi = -1, pj = -1;
        for (Eigen::Index i = t; i < m; ++i)
            for (Eigen::Index j = t; j < n; ++j)
                if (d(i, j) != 0 && (pi < 0 || std::llabs(d(i, j)) < std::llabs(d(pi, pj))))
                {
                    pi = i;
                    pj = j;
                }
        if (pi < 0)
            break;
        d.row(t).swap(d.row(pi));
        u.row(t).swap(u.row(pi));
        d.col(t).swap(d.col(pj));
        v.col(t).swap(v.col(pj));

        bool clean = true;
        for (Eigen::Index i = t + 1; i < m; ++i)
        {
            long long q = d(i, t) / d(t, t);
            d.row(i) -= q * d.row(t);
            u.row(i) -= q * u.row(t);
            if (d(i, t) != 0)
                clean = false;
        }
        for (Eigen::Index j = t + 1; j < n; ++j)
        {
            long long q = d(t, j) / d(t, t);
            d.col(j) -= q * d.col(t);
            v.col(j) -= q * v.col(t);
            if (d(t, j) != 0)
                clean = false;
        }
        if (!clean)
            continue;

        // Enforce divisibility of the rest of the block by the pivot.
        bool divides = true;
        for (Eigen::Index i = t + 1; i < m && divides; ++i)
            for (Eigen::Index j = t + 1; j < n; ++j)
                if (d(i, j) % d(t, t) != 0)
                {
                    d.row(t) += d.row(i);
                    u.row(t) += u.row(i);
                    divides = false;
                    break;
                }
        if (!divides)
            continue;

        if (d(t, t) < 0)
        {
            d.row(t) *= -1;
            u.row(t) *= -1;
        }
        ++t;
    }

    SmithForm out;
    out.u = u;
    out.v = v;
    for (Eigen::Index i = 0; i < t; ++i)
        out.diagonal.push_back(d(i, i));
    return out;
}

bool in_row_lattice(const IMat& hnf, const IVec& w)
{
    IVec rest = w;
    Eigen::Index col = 0;
    for (Eigen::Index r = 0; r < hnf.rows(); ++r)
    {
        while (col < hnf.cols() && hnf(r, col) == 0)
        {
            if (rest(col) != 0)
                return false;
            ++col;
        }
        if (col == hnf.cols())
            break;
        if (rest(col) % hnf(r, col) != 0)
            return false;
        long long q = rest(col) / hnf(r, col);
        rest -= q * hnf.row(r).transpose();
        ++col;
    }
    return rest.isZero();
}

}  // namespace momenta
