/**
 * Integer linear algebra for torus stabilizers: Hermite and Smith normal
 * forms of small integer matrices, and lattice membership.
 */
#ifndef MOMENTA_LATTICE_HPP
#define MOMENTA_LATTICE_HPP

#include <vector>

#include "momenta/linalg.hpp"

namespace momenta {

/// Row-style Hermite normal form: rows span the same Z-lattice as the input
/// rows, upper echelon, positive pivots, entries above a pivot reduced into
/// [0, pivot). Zero rows are dropped, so the result has rank-many rows.
IMat hermite_normal_form(const IMat& rows);

struct SmithForm
{
    IMat u;                               // unimodular, rows x rows
    IMat v;                               // unimodular, cols x cols
    std::vector<long long> diagonal;      // nonzero invariant factors d1 | d2 | ...
};

/// u * a * v = diag(diagonal, 0...).
SmithForm smith_normal_form(const IMat& a);

/// True iff w (length k) is an integer combination of the rows of `hnf`
/// (as returned by hermite_normal_form).
bool in_row_lattice(const IMat& hnf, const IVec& w);

}  // namespace momenta

#endif
