/**
 * Random test data: symplectic forms and matrices, finite groups, weights.
 */
#ifndef MOMENTA_SAMPLERS_HPP
#define MOMENTA_SAMPLERS_HPP

#include <vector>

#include "momenta/rep.hpp"
#include "momenta/space.hpp"

namespace momenta {

/// Random full-rank antisymmetric matrix of size 2n.
Mat random_symplectic_form(Rng& rng, int n);

/// Random symmetric positive-definite matrix.
Mat random_spd(Rng& rng, Eigen::Index n);

/// exp(omega^{-1} S) for random symmetric S: a random element of Sp(omega).
Mat random_symplectic_matrix(Rng& rng, const Mat& omega, double scale = 0.3);

/// Cyclic group generated by a rotation through 2 pi / order in chosen coordinate pairs
/// of the complex model, conjugated by `conj`.
FiniteGroup cyclic_group(int order, const std::vector<int>& pair_multipliers, const Mat& conj);

/// k x n integer weights uniform in [-bound, bound].
IMat random_weights(Rng& rng, Eigen::Index k, Eigen::Index n, int bound = 3);

}  // namespace momenta

#endif
