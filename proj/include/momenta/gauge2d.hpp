/**
 * U(1) lattice gauge theory on triangulated closed oriented surfaces.
 *
 * Cochains are plain vectors indexed by cells: vertices (0-cochains),
 * edges (1-cochains, edges stored as (a, b) with a < b in the global vertex
 * order) and faces (2-cochains, faces stored as oriented triples). The
 * coboundaries are d0 = B1^T and d1 = B2^T for the boundary matrices B1, B2.
 *
 * Cup products use the global vertex order: on a face with sorted vertices
 * v0 < v1 < v2 and orientation sign eps_f,
 *   (alpha cup beta)(f) = eps_f alpha(v0 v1) beta(v1 v2).
 * The momentum identity is exact for the plain cup pairing and is checked
 * in that convention; wedge_form is the antisymmetrized pairing.
 */
#ifndef MOMENTA_GAUGE2D_HPP
#define MOMENTA_GAUGE2D_HPP

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "momenta/linalg.hpp"

namespace momenta {

using SpMat = Eigen::SparseMatrix<double>;

class SurfaceMesh
{
  public:
    using Face = std::array<Eigen::Index, 3>;
    using Edge = std::array<Eigen::Index, 2>;

    /// Derives edges and boundary matrices; throws InputError unless the faces
    /// form a connected closed oriented surface.
    SurfaceMesh(Eigen::Index n_vertices, std::vector<Face> faces);

    Eigen::Index n_vertices() const { return n_vertices_; }
    Eigen::Index n_edges() const { return static_cast<Eigen::Index>(edges_.size()); }
    Eigen::Index n_faces() const { return static_cast<Eigen::Index>(faces_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }

    /// V x E, column of edge (a, b) is e_b - e_a.
    const SpMat& boundary1() const { return b1_; }
    /// E x F, signed incidences of each face's boundary.
    const SpMat& boundary2() const { return b2_; }

    /// Edge index of the sorted pair (a, b); -1 if absent.
    Eigen::Index edge_index(Eigen::Index a, Eigen::Index b) const;
    /// Sorted vertices of face f and the sign of the sorting permutation.
    Face sorted_face(Eigen::Index f) const { return sorted_[static_cast<std::size_t>(f)]; }
    int face_sign(Eigen::Index f) const { return sign_[static_cast<std::size_t>(f)]; }

    Eigen::Index euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }
    int genus() const { return static_cast<int>((2 - euler_characteristic()) / 2); }

    /// {"vertices": V, "faces": [[a, b, c], ...]}.
    std::string to_json() const;
    static SurfaceMesh from_json(const std::string& text);

  private:
    Eigen::Index n_vertices_;
    std::vector<Face> faces_;
    std::vector<Face> sorted_;
    std::vector<int> sign_;
    std::vector<Edge> edges_;
    SpMat b1_;
    SpMat b2_;
};

/// Connected sum of g periodic grid tori (grid x grid squares each), g >= 1.
SurfaceMesh build_genus_surface(int g, int grid = 5);

Vec coboundary0(const SurfaceMesh& mesh, const Vec& phi);
Vec coboundary1(const SurfaceMesh& mesh, const Vec& alpha);

/// sum_f (alpha cup beta)(f).
double cup_pairing(const SurfaceMesh& mesh, const Vec& alpha, const Vec& beta);
/// 1/2 sum_f (alpha cup beta - beta cup alpha)(f); antisymmetric.
double wedge_form(const SurfaceMesh& mesh, const Vec& alpha, const Vec& beta);
/// kappa(sigma, phi) = sum_f phi(v0(f)) sigma_f with v0 the smallest vertex.
double kappa_pairing(const SurfaceMesh& mesh, const Vec& sigma, const Vec& phi);

/// Angle wrapped to (-pi, pi].
double wrap_angle(double x);

struct CurvatureResult
{
    Vec plaquette;   // s = d1 theta
    Vec curvature;   // s wrapped to (-pi, pi]
    long long chern = 0;  // -sum_f round(s_f / 2 pi)
    std::vector<Eigen::Index> ambiguous_faces;  // |s_f| within 1e-6 of an odd multiple of pi
};

CurvatureResult curvature_and_chern(const SurfaceMesh& mesh, const Vec& theta);

/// theta - d0 phi.
Vec gauge_action(const SurfaceMesh& mesh, const Vec& theta, const Vec& phi);

/// |cup(-d0 phi, alpha) + kappa(-d1 alpha, phi)|: the infinitesimal action of phi
/// paired with alpha against the derivative of J = -F. Linear in theta, which
/// therefore does not enter.
double momentum_relation_residual(const SurfaceMesh& mesh, const Vec& phi, const Vec& alpha);

struct HodgeSplit
{
    Vec exact;
    Vec coexact;
    Vec harmonic;
    double orthogonality = 0.0;  // max |pairwise inner product| relative to |alpha|^2
};

/// Unit-weight Hodge decomposition with cached factorizations.
class HodgeSolver
{
  public:
    explicit HodgeSolver(const SurfaceMesh& mesh);
    ~HodgeSolver();
    HodgeSolver(const HodgeSolver&) = delete;
    HodgeSolver& operator=(const HodgeSolver&) = delete;

    HodgeSplit split(const Vec& alpha) const;
    /// Harmonic projection of each column.
    Mat harmonic_part(const Mat& cochains) const;
    const SurfaceMesh& mesh() const { return mesh_; }

  private:
    struct Impl;
    const SurfaceMesh& mesh_;
    std::unique_ptr<Impl> impl_;
};

HodgeSplit hodge_split(const SurfaceMesh& mesh, const Vec& alpha);

/// Rank of the harmonic projection of 2g + 4 deterministic random cochains.
Eigen::Index harmonic_dimension(const HodgeSolver& hodge);

struct CycleBasis
{
    Mat cycles;          // E x 2g, integer entries; B1 cycles = 0
    Mat dual_harmonic;   // E x 2g, harmonic with <dual_i, cycle_j> = delta_ij
    Mat intersection;    // 2g x 2g rounded cup pairing of the duals
    double rounding_residual = 0.0;
};

/// Spanning tree / cotree generators; throws NumericalError if rounding fails.
CycleBasis homology_cycle_basis(const SurfaceMesh& mesh, const HodgeSolver& hodge);

/// Holonomies mod 2pi along the cycles; throws InputError unless flat to 1e-8.
Vec wilson_flat_moduli(const SurfaceMesh& mesh, const Vec& theta, const CycleBasis& cycles);

/// Flat connection sum_i target_i dual_i.
Vec harmonic_connection(const CycleBasis& cycles, const Vec& target);

struct ReducedIntersection
{
    Mat form;                    // omega(dual_i, dual_j)
    double antisymmetry = 0.0;
    double min_singular = 0.0;
    double integrality = 0.0;    // distance to the rounded intersection matrix
    double determinant = 0.0;    // of the rounded matrix
    double darboux_residual = 0.0;  // |S^T form S - J| for the computed Darboux basis S
    double exact_pairing = 0.0;  // max |omega(h, d0 phi)| over sampled phi
    bool pass() const;
};

ReducedIntersection reduced_intersection_check(const SurfaceMesh& mesh, const CycleBasis& cycles, Rng& rng);

/// Connection with uniform curvature 2 pi c / F and Chern number c.
Vec central_ym_connection(const SurfaceMesh& mesh, long long c);

}  // namespace momenta

#endif
