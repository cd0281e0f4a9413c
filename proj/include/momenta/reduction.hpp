/**
 * Singular reduction of linear symplectic actions with quadratic momentum
 * maps: subspace identities at a point, level-set projection, orbit-type
 * strata of a level set, frontier order and reduced dynamics.
 *
 * All subspaces are returned as orthonormal column bases of the ambient
 * space R^n. The G-invariant metric is invariant_metric(rep, M) with M the
 * metric of the symplectic space; slices and complements are taken in it.
 */
#ifndef MOMENTA_REDUCTION_HPP
#define MOMENTA_REDUCTION_HPP

#include <string>
#include <utility>
#include <vector>

#include "momenta/action.hpp"
#include "momenta/verify.hpp"

namespace momenta {

struct BifurcationResult
{
    double ker_is_orbit_orthogonal = 0.0;  // ker DJ = (g.m)^omega
    double image_annihilator = 0.0;        // (img DJ)^perp = g_m
    double ker_orthogonal_is_orbit = 0.0;  // (ker DJ)^omega = g.m
    double ker_radical = 0.0;              // ker DJ cap (ker DJ)^omega = g_mu.m
    double max_distance() const;
};

/// Projector distances of the four subspace identities at m.
BifurcationResult bifurcation_check(const LieAlgebraAction& action, const Vec& m);

struct WittArtinDecomposition
{
    Mat q_m;     // q.m with q the complement of g_mu in g
    Mat gmu_m;   // g_mu.m
    Mat e;       // symplectic normal space T_mS cap ker DJ
    Mat f;       // metric complement of the other three blocks
    Eigen::Index stabilizer_dim = 0;
    double direct_sum_residual = 0.0;  // |sum of dims - n| + distance of the combined span from R^n
    double ker_residual = 0.0;         // distance of ker DJ from g_mu.m + E, plus dimension mismatch
    double e_form_min_singular = 0.0;  // of omega restricted to E (infinity if E = 0)
    bool parity_even = true;           // 2 dim g_m - dim E is even
};

WittArtinDecomposition witt_artin(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& m);

struct LevelProjection
{
    Vec x;
    bool converged = false;
    bool near_singular = false;  // DJ lost rank along the iteration
    int iterations = 0;
    double residual = 0.0;
};

/// Minimum-norm Gauss-Newton onto J^{-1}(mu); at most 50 iterations.
LevelProjection project_to_level(const LieAlgebraAction& action, const Vec& x0, const Vec& mu,
                                 double tol = 1e-10);

struct StratumReport
{
    std::string orbit_type_id;
    StabilizerDescriptor stabilizer;
    Eigen::Index ambient_dim = 0;  // dim g_mu.m + dim E^{G_m}
    Eigen::Index reduced_dim = 0;  // dim E^{G_m}
    Mat reduced_basis;             // n x reduced_dim, orthonormal basis of E^{G_m} at the first witness
    Mat reduced_form;              // omega restricted to reduced_basis
    double reduced_form_min_singular = 0.0;
    std::vector<Vec> witnesses;
    VerificationReport report;
};

struct StrataResult
{
    Vec mu;
    std::vector<StratumReport> strata;  // sorted by orbit_type_id
    bool exhaustive = false;            // true when enumerated combinatorially (torus)
    std::vector<std::string> notes;
};

/// Orbit-type strata of J^{-1}(mu). mu != 0 requires an abelian group.
StrataResult strata_of_level(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& mu, Rng& rng,
                             int sample_budget = 400);
StrataResult strata_of_zero_level(const LieAlgebraAction& action, const CompactGroupRep& rep, Rng& rng,
                                  int sample_budget = 400);

struct FrontierRelation
{
    std::string lower;
    std::string upper;
    std::string method;  // ray_scaling | nearest_point
};

struct FrontierResult
{
    std::vector<FrontierRelation> order;
    std::vector<std::string> violations;
    std::vector<std::string> inconclusive;
};

/// Closure relations between strata by ray scaling and nearest-point sampling,
/// with violations of closure-inclusion and dimension monotonicity.
FrontierResult frontier_check(const LieAlgebraAction& action, const CompactGroupRep& rep, const StrataResult& strata,
                              Rng& rng);

/// min over sampled-and-refined g of |g x - y|; exact for finite groups.
double orbit_distance(const CompactGroupRep& rep, const Vec& x, const Vec& y);

struct DynamicsReport
{
    double noether_drift = 0.0;
    bool orbit_type_preserved = true;
    double max_mismatch = 0.0;      // orbit distance between ambient and reduced trajectories
    double compared_until = 0.0;    // end of the comparison window
    int recenterings = 0;
    bool shortened = false;
    std::vector<std::string> notes;
};

/// Integrates the ambient flow from the stratum's first witness and the
/// reduced flow in E^{G_m} charts; the chart is recentered when it grows.
DynamicsReport reduced_dynamics_check(const LieAlgebraAction& action, const CompactGroupRep& rep,
                                      const HamiltonianSystem& system, const StratumReport& stratum, double t_end,
                                      double dt);

}  // namespace momenta

#endif
