/**
 * SU(2) representation variety of a closed genus-g surface group, with
 * SU(2) realized as unit quaternions.
 *
 * A point is a tuple (a_1, b_1, ..., a_g, b_g) and the relator is
 *   R = prod_i a_i b_i a_i^-1 b_i^-1.
 * A tangent vector is a 2g-tuple of pure quaternions delta_k acting by right
 * multiplication, x_k -> x_k exp(delta_k); coordinates are 6g reals.
 */
#ifndef MOMENTA_REPVAR_HPP
#define MOMENTA_REPVAR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "momenta/linalg.hpp"

namespace momenta {

using Quat = Eigen::Quaterniond;

struct RepPoint
{
    int g = 0;
    std::vector<Quat> elements;  // a_1, b_1, ..., a_g, b_g
    bool solved = false;
    double residual = 0.0;       // |R - 1| in R^4
    int iterations = 0;
};

/// prod_i [a_i, b_i].
Quat relator(const std::vector<Quat>& elements);
double relator_residual(const std::vector<Quat>& elements);

/// 4 x 6g derivative of R under right-multiplicative perturbations.
Mat relator_jacobian(const std::vector<Quat>& elements);

/// Minimum-norm Gauss-Newton from a given start; at most max_iter steps.
RepPoint solve_rep_from(std::vector<Quat> start, int max_iter = 200);
/// Random start drawn from the seed; throws InputError for g < 1.
RepPoint solve_rep(int g, std::uint64_t seed, int max_iter = 200);

/// Simultaneous conjugation q x q^-1 of every element.
RepPoint conjugate(const RepPoint& rep, const Quat& q);

enum class StabilizerClass { full_group, circle, center, indeterminate };
std::string to_string(StabilizerClass c);

struct StabilizerInfo
{
    StabilizerClass cls = StabilizerClass::indeterminate;
    int commutant_dim = -1;    // dimension of the commuting pure quaternions
    Vec singular_values;       // of the commutant system, descending
};

/// Commutant of the image in su(2); singular values below 1e-6 count as zero,
/// values within a factor 10 of it make the result indeterminate.
StabilizerInfo stabilizer_type(const RepPoint& rep);

struct RepStratumReport
{
    StabilizerClass cls = StabilizerClass::indeterminate;
    int hom_dimension = -1;      // 6g - rank of the relator Jacobian
    int reduced_dimension = -1;  // hom_dimension - (3 - stabilizer dimension)
    bool rank_ambiguous = false;
    Vec jacobian_singular_values;
};

/// Throws InputError unless the point is solved.
RepStratumReport stratum_dimension(const RepPoint& rep);

struct RepClassSummary
{
    StabilizerClass cls = StabilizerClass::indeterminate;
    int count = 0;
    std::vector<int> hom_dimensions;      // distinct values, sorted
    std::vector<int> reduced_dimensions;  // distinct values, sorted
};

struct RepSurvey
{
    int g = 0;
    int samples = 0;
    int converged = 0;
    double max_residual = 0.0;             // over converged samples
    double max_conjugation_residual = 0.0; // relator residual after random conjugation
    int conjugation_class_changes = 0;     // stabilizer class changed under conjugation
    bool all_reduced_even = true;
    int rank_ambiguous = 0;
    std::vector<RepClassSummary> classes;  // ordered full_group, circle, center, indeterminate
};

/// Solves seeds base_seed, base_seed + 1, ... and checks 20 random conjugates per point.
RepSurvey survey_rep_variety(int g, int samples, std::uint64_t base_seed);

}  // namespace momenta

#endif
