/**
 * Verification suites: each runs one family of identities on sampled data
 * and records the worst residual against its tolerance.
 *
 * Every suite draws randomness only from the Rng it is handed, so reports
 * are reproducible from the seed.
 */
#ifndef MOMENTA_SUITES_HPP
#define MOMENTA_SUITES_HPP

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "momenta/linalg.hpp"

namespace momenta {

struct Check
{
    std::string name;
    std::string anchor;   // the identity being checked, in words
    double max_residual = 0.0;
    double tolerance = 0.0;
    int samples = 0;

    bool pass() const { return max_residual <= tolerance; }
    void observe(double residual);
};

struct Suite
{
    Suite(std::string suite_name, double scale) : name(std::move(suite_name)), tol_scale(scale) {}

    std::string name;
    double tol_scale = 1.0;
    std::deque<Check> checks;  // stable references across add()
    nlohmann::json data = nlohmann::json::object();

    /// Adds a check with tolerance base_tolerance * tol_scale.
    Check& add(const std::string& check_name, const std::string& anchor, double base_tolerance);
    bool pass() const;
    nlohmann::json to_json() const;
};

/// Random subspaces of random symplectic spaces of dimension 2..20.
Suite suite_double_orthogonal(Rng& rng, int trials, double tol_scale = 1.0);
/// Random cyclic groups and torus representations.
Suite suite_invariant_splitting(Rng& rng, int reps, double tol_scale = 1.0);
/// Random torus representations, points and tangent vectors.
Suite suite_momentum_relation(Rng& rng, int triples, double tol_scale = 1.0);
/// Random torus reps on C^3 and SU(2) on C^2, `points` samples each.
Suite suite_bifurcation(Rng& rng, int points, double tol_scale = 1.0);
/// Normal forms of the named demo models (all models when empty).
Suite suite_normal_form(Rng& rng, const std::vector<std::string>& models, int samples, double tol_scale = 1.0);
/// MGS data for the circle with weights (1, -1) at the origin and at a free zero-level point.
Suite suite_mgs(Rng& rng, int samples, double tol_scale = 1.0);
/// Strata and frontier for a torus representation on C^n; mu empty means the zero level.
Suite suite_linear_reduction(Rng& rng, const IMat& weights, const Vec& mu, double tol_scale = 1.0);
/// Weights (1, -1) and (1, 1) with their expected strata.
Suite suite_reduction_examples(Rng& rng, double tol_scale = 1.0);
/// Rotation-invariant quartic on C^2 under weights (1, -1).
Suite suite_reduced_dynamics(Rng& rng, double t_end, double dt, double tol_scale = 1.0);
/// Hodge theory, momentum identity, Chern numbers and flat moduli on a genus-g surface.
Suite suite_gauge_flat(Rng& rng, int genus, int transforms, int targets, int grid = 5, double tol_scale = 1.0);
/// Central Yang-Mills connections with the given Chern numbers.
Suite suite_gauge_ym(Rng& rng, int genus, const std::vector<long long>& chern, int transforms, int grid = 5,
                     double tol_scale = 1.0);
/// Representation variety survey over seeds base_seed, base_seed + 1, ...
Suite suite_repvar(int genus, int samples, std::uint64_t base_seed, double tol_scale = 1.0);

}  // namespace momenta

#endif
