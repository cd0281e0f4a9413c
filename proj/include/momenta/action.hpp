/**
 * Quadratic momentum maps of linear symplectic actions, stabilizers and
 * orbit types, and Hamiltonian flows with Noether bookkeeping.
 *
 * Conventions: J_i(x) = 1/2 omega(x, A_i x), DJ_i(x) v = omega(x, A_i v),
 * and X_h = omega^{-1} grad h, so that X_{J_i}(x) = A_i x.
 */
#ifndef MOMENTA_ACTION_HPP
#define MOMENTA_ACTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "momenta/rep.hpp"

namespace momenta {

struct MomentumValue
{
    Vec components;
    Mat kappa;  // pairing matrix, identity by default
};

MomentumValue quadratic_momentum(const LieAlgebraAction& action, const Vec& x);

/// Components of J(x) only.
Vec momentum(const LieAlgebraAction& action, const Vec& x);

/// k x dim matrix with rows x^T omega A_i.
Mat momentum_jacobian(const LieAlgebraAction& action, const Vec& x);

/// |omega(A_i x, v) + DJ_i(x) v|.
double momentum_relation_residual(const LieAlgebraAction& action, const Vec& x, const Vec& v, Eigen::Index i);

/// max_{i,j} |DJ(x)(A_j x)_i - sum_l c_ij^l J_l(x)|; nullopt without structure constants.
std::optional<double> infinitesimal_equivariance_residual(const LieAlgebraAction& action, const Vec& x);

/// Coefficients c with g^{-1} A_i g = sum_l c(i, l) A_l (least squares); throws if not in the span.
Mat coadjoint_matrix(const LieAlgebraAction& action, const Mat& g);

/// k x d basis of g_mu = {xi : ad*_xi mu = 0}; all of g when abelian or mu = 0.
/// Throws InputError for nonabelian mu != 0 without structure constants.
Mat coadjoint_stabilizer(const LieAlgebraAction& action, const Vec& mu);

/// |J(g x) - CoAd_g J(x)|_inf.
double group_equivariance_residual(const LieAlgebraAction& action, const Mat& g, const Vec& x);

struct StabilizerDescriptor
{
    std::string orbit_type;          // canonical key, equal keys <=> conjugate stabilizers
    Eigen::Index dimension = 0;      // dimension of the stabilizer subgroup
    long long components = 1;        // number of connected components (0 if unknown)
    bool full_group = false;

    std::vector<int> finite_elements;  // FiniteGroup: indices into the element list
    Mat algebra_basis;                 // k x dim: coefficient vectors spanning g_m

    // Torus data: {t : W_S t in Z^|S|}, t = v s, s_i in (1/d_i) Z for i < rank.
    std::vector<Eigen::Index> support;
    IMat lattice_hnf;
    IMat smith_v;
    std::vector<long long> smith_diagonal;

    std::vector<int> discrete_fixing;  // MatrixGroup: component representatives fixing x
};

StabilizerDescriptor stabilizer(const CompactGroupRep& rep, const Vec& x);

/// Elements of the stabilizer: all of them for finite groups, a deterministic
/// spread of samples (including every torus component) otherwise.
std::vector<Mat> stabilizer_elements(const CompactGroupRep& rep, const StabilizerDescriptor& stab, int count);

/// Coordinate pairs j with w_j in the stabilizer's character lattice.
std::vector<Eigen::Index> torus_fixed_pairs(const IMat& weights, const StabilizerDescriptor& stab);

/// Fixed subspace X^{G_m} of the stabilizer described by `stab`.
Mat stabilizer_fixed_subspace(const CompactGroupRep& rep, const StabilizerDescriptor& stab);

struct HamiltonianSystem
{
    std::function<double(const Vec&)> h;
    std::function<Vec(const Vec&)> grad;  // optional; finite differences otherwise
};

/// Central differences with step cbrt(eps) (1 + |x|).
Vec gradient(const HamiltonianSystem& system, const Vec& x);

Vec hamiltonian_vector_field(const SymplecticSpace& space, const HamiltonianSystem& system, const Vec& x);

/// Classical fourth-order Runge-Kutta step for x' = f(x).
Vec rk4_step(const std::function<Vec(const Vec&)>& f, const Vec& x, double dt);

struct FlowResult
{
    std::vector<Vec> trajectory;  // every `record_every` steps, endpoints included
    Vec final_state;
    double max_drift = 0.0;       // max_t |J(x(t)) - J(x0)|_inf
    bool diverged = false;
    int steps = 0;
};

FlowResult hamiltonian_flow_noether(const LieAlgebraAction& action, const HamiltonianSystem& system,
                                    const Vec& x0, double t_end, double dt, int record_every = 0,
                                    double divergence_bound = 1e8);

/// max |h(g x) - h(x)| over sampled group elements and points.
double invariance_residual(const CompactGroupRep& rep, const HamiltonianSystem& system, Rng& rng, int samples = 32);

}  // namespace momenta

#endif
