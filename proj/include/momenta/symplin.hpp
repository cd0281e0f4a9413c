/**
 * Symplectic linear algebra on a fixed finite-dimensional space.
 */
#ifndef MOMENTA_SYMPLIN_HPP
#define MOMENTA_SYMPLIN_HPP

#include "momenta/rep.hpp"
#include "momenta/space.hpp"

namespace momenta {

/// V^omega = {x : omega(x, v) = 0 for all v in V}, the null space of V^T omega.
Subspace symplectic_orthogonal(const SymplecticSpace& space, const Subspace& v);

struct DoubleOrthogonalResult
{
    bool closed = false;
    double distance = 0.0;  // |P_V - P_{V^{omega omega}}|_F
};

DoubleOrthogonalResult double_orthogonal_check(const SymplecticSpace& space, const Subspace& v,
                                               double tol = kSubspaceTol);

/// The three equivalent characterizations of a symplectic subspace.
struct SymplecticSubspaceRoutes
{
    bool restricted_rank_full = false;   // rank of V^T omega V equals dim V
    bool meets_orthogonal_trivially = false;  // V cap V^omega = {0}
    bool gamma_surjective = false;       // v -> omega(v, .)|_V hits every functional on V
};

SymplecticSubspaceRoutes symplectic_subspace_routes(const SymplecticSpace& space, const Subspace& v);

/// Throws NumericalError if the three routes disagree.
bool is_symplectic_subspace(const SymplecticSpace& space, const Subspace& v);

/// J = A (-A^2)^{-1/2} where omega(x, y) = <A x, y>_metric.
ComplexStructure compatible_complex_structure(const SymplecticSpace& space);

/// g(x, y) = omega(x, J y), i.e. the matrix omega * J.
Mat associated_metric(const SymplecticSpace& space, const ComplexStructure& j);

/// Columns (e_1..e_n, f_1..f_n) with S^T omega S = [[0, I], [-I, 0]].
Mat darboux_basis(const SymplecticSpace& space);

/// Standard block form of size 2n.
Mat standard_omega(Eigen::Index n);

struct FixedPointSplitting
{
    Subspace fixed;
    Subspace complement;
    double projector_sum_residual = 0.0;  // |P_fixed + P_complement - I| for the omega-projectors
    double invariance_residual = 0.0;     // max |g x - x| over listed/sampled g, x in fixed
};

/// X = X_G (+) (X_G)^omega. Throws InputError for non-symplectic reps.
FixedPointSplitting fixed_point_splitting(const SymplecticSpace& space, const CompactGroupRep& rep);

/// omega-projector onto span(basis) along its symplectic orthogonal; basis must span a symplectic subspace.
Mat symplectic_projector(const SymplecticSpace& space, const Mat& basis);

}  // namespace momenta

#endif
