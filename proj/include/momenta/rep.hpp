/**
 * Compact groups acting linearly and symplectically on a symplectic space.
 *
 * Three representation variants are supported:
 *   - FiniteGroup: an explicit list of matrices closed under products;
 *   - Torus: an integer weight matrix w (k x n) acting on C^n = R^{2n},
 *     coordinates (x1, y1, ..., xn, yn); t in R^k / Z^k rotates the j-th
 *     complex coordinate by the angle 2*pi*<w_j, t>, where w_j is column j;
 *   - MatrixGroup: a Lie algebra of infinitesimally symplectic matrices plus
 *     user-supplied representatives of the discrete components.
 */
#ifndef MOMENTA_REP_HPP
#define MOMENTA_REP_HPP

#include <optional>
#include <variant>
#include <vector>

#include "momenta/space.hpp"

namespace momenta {

/// c[l](i, j) = c_{ij}^l, i.e. [A_i, A_j] = sum_l c_{ij}^l A_l.
using StructureConstants = std::vector<Mat>;

/**
 * A basis A_1..A_k of a Lie algebra acting on a symplectic space. Each A_i
 * satisfies A_i^T omega + omega A_i = 0.
 */
class LieAlgebraAction
{
  public:
    LieAlgebraAction(SymplecticSpace space, std::vector<Mat> generators,
                     std::optional<StructureConstants> structure_constants = std::nullopt);

    const SymplecticSpace& space() const { return space_; }
    const std::vector<Mat>& generators() const { return generators_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(generators_.size()); }
    Eigen::Index space_dim() const { return space_.dim(); }
    const std::optional<StructureConstants>& structure_constants() const { return structure_; }

    /// A(xi) = sum_i xi_i A_i.
    Mat generator(const Vec& xi) const;
    /// Columns A_1 x, ..., A_k x (the infinitesimal orbit g.x).
    Mat orbit_matrix(const Vec& x) const;
    /// True if all generators commute (to 1e-10).
    bool is_abelian() const;

  private:
    SymplecticSpace space_;
    std::vector<Mat> generators_;
    std::optional<StructureConstants> structure_;
};

/// Least-squares structure constants; throws if the span is not closed under brackets.
StructureConstants compute_structure_constants(const std::vector<Mat>& generators, double tol = 1e-10);

class FiniteGroup
{
  public:
    /// Validates closure under multiplication and inverses (entrywise 1e-9).
    explicit FiniteGroup(std::vector<Mat> elements);

    const std::vector<Mat>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    int product(int a, int b) const { return table_[a][b]; }
    int inverse(int a) const { return inverse_[a]; }
    int identity() const { return identity_; }
    /// Index of the element equal to m (entrywise 1e-9), or -1.
    int find(const Mat& m) const;

  private:
    std::vector<Mat> elements_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_ = -1;
};

struct TorusRep
{
    IMat weights;  // k x n
};

struct MatrixGroupRep
{
    LieAlgebraAction algebra;
    std::vector<Mat> components;  // representatives of the discrete components (identity included)
};

class CompactGroupRep
{
  public:
    using Variant = std::variant<FiniteGroup, TorusRep, MatrixGroupRep>;

    explicit CompactGroupRep(FiniteGroup g) : v_(std::move(g)) {}
    explicit CompactGroupRep(TorusRep t);
    explicit CompactGroupRep(MatrixGroupRep m) : v_(std::move(m)) {}

    const Variant& variant() const { return v_; }
    bool is_finite() const { return std::holds_alternative<FiniteGroup>(v_); }
    bool is_torus() const { return std::holds_alternative<TorusRep>(v_); }
    bool is_matrix_group() const { return std::holds_alternative<MatrixGroupRep>(v_); }
    const FiniteGroup& finite() const { return std::get<FiniteGroup>(v_); }
    const TorusRep& torus() const { return std::get<TorusRep>(v_); }
    const MatrixGroupRep& matrix_group() const { return std::get<MatrixGroupRep>(v_); }

    /// Dimension of the space acted on.
    Eigen::Index space_dim() const;
    /// Dimension of the group.
    Eigen::Index group_dim() const;
    bool is_abelian() const;

    /// Symplectic space the rep is naturally defined on (complex model for tori).
    /// For finite and matrix groups it is the one passed at construction time or
    /// via the algebra; finite groups need it supplied.
    LieAlgebraAction lie_algebra_action(const SymplecticSpace& space) const;

    /// Random group elements; finite groups return the full list in order.
    std::vector<Mat> sample_elements(Rng& rng, int count) const;

    /// Max over listed/sampled g of |g^T omega g - omega|; throws InputError above tol.
    double check_symplectic(const SymplecticSpace& space, Rng& rng, double tol = 1e-10) const;

  private:
    Variant v_;
};

/// Torus element for parameter t in R^k.
Mat torus_element(const IMat& weights, const Vec& t);

/// Torus Lie algebra generators: A_i = blockdiag_j(w_ij * [[0, -1], [1, 0]]).
std::vector<Mat> torus_generators(const IMat& weights);

/// Realification of a complex matrix acting on C^n in the (x1, y1, ...) model.
Mat realify(const Eigen::MatrixXcd& m);

/// su(2) acting on C^2 by the defining representation, basis i*sigma_k/2.
MatrixGroupRep su2_on_c2();

/// exp(A) for a real square matrix.
Mat matrix_exp(const Mat& a);

/// Group-averaged (invariant) inner product, starting from `metric`.
Mat invariant_metric(const CompactGroupRep& rep, const Mat& metric);

}  // namespace momenta

#endif
