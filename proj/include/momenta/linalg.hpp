/**
 * Dense linear-algebra helpers shared by every module: numerical rank,
 * orthonormal bases, null spaces, projectors and subspace arithmetic.
 *
 * A subspace is always handed around as a matrix whose columns span it.
 * Zero-dimensional subspaces are n x 0 matrices.
 */
#ifndef MOMENTA_LINALG_HPP
#define MOMENTA_LINALG_HPP

#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace momenta {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using Rng = std::mt19937_64;

/// Bad input: shapes, out-of-range arguments, non-symplectic data.
class InputError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not produce a trustworthy answer.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Singular values below max(rows, cols) * eps * sigma_max count as zero.
inline constexpr double kRankEps = 1e-12;

// Threshold for subspace equality via projector distance.
inline constexpr double kSubspaceTol = 1e-8;

double rank_threshold(const Vec& singular_values, Eigen::Index rows, Eigen::Index cols,
                      double eps = kRankEps);

Eigen::Index numerical_rank(const Mat& a, double eps = kRankEps);

/// Orthonormal basis of the column space.
Mat orth(const Mat& a, double eps = kRankEps);

/// Orthonormal basis of {x : a x = 0}; `a` has `cols` columns even if it has no rows.
Mat null_space(const Mat& a, Eigen::Index cols, double eps = kRankEps);
inline Mat null_space(const Mat& a, double eps = kRankEps) { return null_space(a, a.cols(), eps); }

/// Orthogonal projector onto the span of the columns of `basis` (n x n).
Mat projector(const Mat& basis, Eigen::Index n, double eps = kRankEps);
inline Mat projector(const Mat& basis) { return projector(basis, basis.rows()); }

/// Frobenius norm of the difference of the two orthogonal projectors.
double projector_distance(const Mat& a, const Mat& b);

Mat span_sum(const Mat& a, const Mat& b, double eps = kRankEps);
Mat span_intersection(const Mat& a, const Mat& b, double eps = kRankEps);

/// Basis of {x : <x, b>_metric = 0 for all columns b}.
Mat metric_complement(const Mat& basis, const Mat& metric, double eps = kRankEps);

/// Orthonormalize the columns of `basis` with respect to `metric` (Cholesky-based).
Mat metric_orthonormalize(const Mat& basis, const Mat& metric);

/// Moore-Penrose pseudo-inverse with the same rank rule.
Mat pinv(const Mat& a, double eps = kRankEps);

/// Smallest singular value (0 for empty matrices).
double min_singular_value(const Mat& a);

/// Flip the sign of each column so that its largest-magnitude entry is positive.
void canonicalize_signs(Mat& basis);

Mat random_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Vec random_normal(Rng& rng, Eigen::Index n);
Vec random_unit(Rng& rng, Eigen::Index n);

/// Lawson-Hanson non-negative least squares: min |a x - b| subject to x >= 0.
Vec nnls(const Mat& a, const Vec& b, int max_iter = 500);

}  // namespace momenta

#endif
