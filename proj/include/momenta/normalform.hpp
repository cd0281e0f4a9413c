/**
 * Constructive normal forms of smooth maps near a point, and their
 * momentum-map refinement.
 *
 * Domain chart coordinates are (x1, x2) with x1 in ker and x2 in coimg of
 * the Jacobian T at the base point m; the domain point is m + K x1 + C x2.
 * Target coordinates are (y1, y2) with y1 in coker and y2 in img; the target
 * chart is translation by f(m), so f~(u) = f(m + u) - f(m). Then
 *
 *   psi(x1, x2)   = (x1, That^{-1} I^T f~(K x1 + C x2))
 *   phi(y1, y2)   = (y1 + Q^T f~(psi^{-1}(0, That^{-1} y2)), y2)
 *   f_sing(x)     = Q^T f~(psi^{-1}(x)) - Q^T f~(psi^{-1}(0, x2))
 *
 * and phi^{-1} o f~ o psi^{-1}(x1, x2) = (f_sing(x1, x2), That x2).
 */
#ifndef MOMENTA_NORMALFORM_HPP
#define MOMENTA_NORMALFORM_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "momenta/action.hpp"
#include "momenta/verify.hpp"

namespace momenta {

struct SmoothMap
{
    Eigen::Index domain_dim = 0;
    Eigen::Index target_dim = 0;
    std::function<Vec(const Vec&)> f;
    std::function<Mat(const Vec&)> jacobian;  // optional; central differences otherwise
    Vec base_point;

    Vec operator()(const Vec& x) const { return f(x); }
    Mat jacobian_at(const Vec& x) const;
};

/// Central-difference Jacobian with step cbrt(eps) (1 + |x|).
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, Eigen::Index target_dim);

/// Relative error between the supplied Jacobian and central differences at the base point.
double jacobian_consistency(const SmoothMap& map);

struct LinearSplitting
{
    Mat ker;    // domain_dim x dk
    Mat coimg;  // domain_dim x r
    Mat coker;  // target_dim x dq
    Mat img;    // target_dim x r
    Mat t_hat;  // r x r, img^T T coimg
    Vec singular_values;
    double tol = 0.0;
    bool ill_separated = false;

    Eigen::Index rank() const { return t_hat.rows(); }
};

/// SVD split; singular values <= tol count as zero.
LinearSplitting split_jacobian(const Mat& t, double tol);

/// Default tolerance 1e-8 (1 + sigma_max).
LinearSplitting split_jacobian(const Mat& t);

/// Same split with ker/coimg and img/coker projectors averaged over the given
/// groups (matrices acting on domain and target) before re-orthonormalizing.
LinearSplitting equivariant_split_jacobian(const Mat& t, double tol, const std::vector<Mat>& domain_group,
                                           const std::vector<Mat>& target_group);

struct NewtonResult
{
    Vec x;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

/// Damped Newton for g(x) = 0, max 50 iterations, stop at |step| <= 1e-12 (1 + |x|).
NewtonResult damped_newton(const std::function<Vec(const Vec&)>& g, const std::function<Mat(const Vec&)>& dg,
                           Vec x0, int max_iter = 50, double step_tol = 1e-12);

class NormalFormData
{
  public:
    NormalFormData(SmoothMap map, LinearSplitting split);

    const SmoothMap& map() const { return map_; }
    const LinearSplitting& splitting() const { return split_; }
    Eigen::Index ker_dim() const { return split_.ker.cols(); }
    Eigen::Index rank() const { return split_.rank(); }
    Eigen::Index coker_dim() const { return split_.coker.cols(); }
    Eigen::Index chart_dim() const { return ker_dim() + rank(); }

    /// f~(u) = f(m + u) - f(m).
    Vec shifted(const Vec& u) const;
    /// Chart coordinates (x1, x2) to the displacement K x1 + C x2.
    Vec embed(const Vec& x) const;

    Vec psi(const Vec& x) const;
    /// Numeric inverse; x1 block copied, x2 by damped Newton.
    NewtonResult psi_inverse(const Vec& y) const;
    /// Throws NumericalError if Newton fails.
    Vec psi_inverse_or_throw(const Vec& y) const;

    /// Target coordinates (y1 coker, y2 img) of a target displacement.
    Vec target_coords(const Vec& displacement) const;
    Vec phi(const Vec& y) const;
    Vec phi_inverse(const Vec& z) const;

    Vec f_sing(const Vec& x) const;
    /// (f_sing(x), That x2).
    Vec normal_form(const Vec& x) const;

    /// d/dx of psi^{-1}(x1, 0) in (x1, x2) coordinates; dk columns.
    Mat kernel_graph_derivative(const Vec& x1) const;

    double validity_radius() const { return validity_radius_; }

  private:
    SmoothMap map_;
    LinearSplitting split_;
    Vec f_m_;
    Mat t_hat_inv_;
    double validity_radius_ = 0.0;

    double compute_validity_radius() const;
};

/// Build the normal form (computes the validity radius; throws if none).
std::shared_ptr<NormalFormData> deform_domain(const SmoothMap& map, const LinearSplitting& split);

/// Checks that D phi restricted to coker is the identity (finite differences).
double deform_target_check(const NormalFormData& nf, Rng& rng, int samples = 16);

struct NormalFormResult
{
    std::shared_ptr<NormalFormData> data;
    VerificationReport report;
};

/// Splits, deforms, and verifies the invariants on `samples` points inside the validity radius.
NormalFormResult compute_normal_form(const SmoothMap& map, Rng& rng, int samples = 64);
NormalFormResult compute_normal_form(const SmoothMap& map, const LinearSplitting& split, Rng& rng,
                                     int samples = 64);

/// Named demo maps (base point 0): submersion, parabola, fold, mixed, cubic, identity, momentum.
SmoothMap demo_model(const std::string& name);
std::vector<std::string> demo_model_names();

// ---------------------------------------------------------------------------
// Momentum-map refinement

struct MGSData
{
    Eigen::Index ker_dim = 0;
    std::function<Mat(const Vec&)> omega_bar;  // x in ker coordinates -> ker_dim x ker_dim
    std::function<Vec(const Vec&)> j_sing;     // pairings kappa(J_sing(x), xi_b), b over a basis of h
    std::vector<Mat> h_action;                 // xi_b . x = h_action[b] x on ker coordinates
    std::function<Vec(const Vec&)> chart;      // ker coordinates -> ambient point (optional)
    double radius = 1.0;                       // sampling patch radius
    bool strong = false;
    VerificationReport report;

    // Context (empty for synthetic data).
    Vec base_point;
    Vec mu;
    Mat slice_basis;
    Mat h_basis;  // k x h coefficient vectors of the stabilizer algebra
    std::shared_ptr<NormalFormData> normal_form;
};

/// Assemble from the quadratic momentum map of `action` at m.
MGSData assemble_mgs(const LieAlgebraAction& action, const CompactGroupRep& rep, const Vec& m, Rng& rng,
                     int samples = 128);

/// Same, with an explicit map for J (must agree with the action's momentum map).
MGSData assemble_mgs(const LieAlgebraAction& action, const CompactGroupRep& rep, const SmoothMap& j_map,
                     const Vec& m, Rng& rng, int samples = 128);

/// Momentum identity, nondegeneracy, constancy and quadratic identity on samples.
VerificationReport verify_mgs(const MGSData& mgs, Rng& rng, int samples = 128);

/// Quadratic identity residual max |J_sing(x)_b - 1/2 omega_bar_0(x, xi_b x)|.
double quadratic_identity_residual(const MGSData& mgs, Rng& rng, int samples);

/// Moser-path upgrade to a constant form; returns input marked strong when already constant.
MGSData strong_upgrade(const MGSData& mgs, Rng& rng, int samples = 32);

struct ApproximationTypeResult
{
    std::string orbit_type;
    std::string status;  // found | inconclusive | ray_failed
    std::vector<Vec> witnesses;  // ker coordinates
    double max_ray_residual = 0.0;
};

struct ApproximationReport
{
    std::vector<ApproximationTypeResult> types;
    bool consistent() const;
};

/// For each orbit type (all sampled types when `orbit_types` is empty), search
/// J_sing^{-1}(0) and check that rays scale to 0 inside the same type.
ApproximationReport approximation_property_check(const MGSData& mgs, const CompactGroupRep& rep,
                                                 const std::vector<std::string>& orbit_types, Rng& rng,
                                                 int budget = 200);

}  // namespace momenta

#endif
