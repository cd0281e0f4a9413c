/**
 * Value types for finite-dimensional symplectic linear algebra.
 */
#ifndef MOMENTA_SPACE_HPP
#define MOMENTA_SPACE_HPP

#include "momenta/linalg.hpp"

namespace momenta {

/**
 * An even-dimensional real vector space with a nondegenerate antisymmetric
 * form omega(x, y) = x^T * omega * y and an auxiliary inner product.
 */
class SymplecticSpace
{
  public:
    /// Validates shape, antisymmetry (to `antisym_tol`) and full rank.
    explicit SymplecticSpace(Mat omega, double antisym_tol = 1e-12);
    SymplecticSpace(Mat omega, Mat metric, double antisym_tol = 1e-12);

    Eigen::Index dim() const { return omega_.rows(); }
    const Mat& omega() const { return omega_; }
    const Mat& metric() const { return metric_; }

    double form(const Vec& x, const Vec& y) const { return x.dot(omega_ * y); }

    /// Same form, different auxiliary inner product.
    SymplecticSpace with_metric(Mat metric) const { return SymplecticSpace(omega_, std::move(metric)); }

  private:
    Mat omega_;
    Mat metric_;
};

/// Canonical block form [[0, I], [-I, 0]] on R^{2n}, ordered (q1..qn, p1..pn).
SymplecticSpace make_standard(int n);

/// omega = blockdiag([[0, 1], [-1, 0]]) with coordinates (x1, y1, ..., xn, yn),
/// the real model of C^n used by torus and unitary actions.
SymplecticSpace make_complex_model(int n);

/**
 * A linear subspace given by a basis of full column rank. Comparisons go
 * through projectors, never through the basis itself.
 */
class Subspace
{
  public:
    Subspace(Eigen::Index ambient_dim, Mat basis, double eps = kRankEps);

    static Subspace zero(Eigen::Index n) { return Subspace(n, Mat(n, 0)); }
    static Subspace full(Eigen::Index n) { return Subspace(n, Mat::Identity(n, n)); }
    /// Span of arbitrary columns; dependent columns are dropped.
    static Subspace span(const Mat& columns, double eps = kRankEps);

    Eigen::Index ambient_dim() const { return ambient_dim_; }
    Eigen::Index dim() const { return basis_.cols(); }
    const Mat& basis() const { return basis_; }
    Mat projector() const { return momenta::projector(basis_, ambient_dim_); }

    double distance(const Subspace& other) const;
    bool equals(const Subspace& other, double tol = kSubspaceTol) const { return distance(other) <= tol; }
    bool contains(const Subspace& other, double tol = kSubspaceTol) const;

  private:
    Eigen::Index ambient_dim_;
    Mat basis_;
};

struct ComplexStructure
{
    Mat j;
};

}  // namespace momenta

#endif
