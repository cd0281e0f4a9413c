/**
 * Sample-based verification records shared by the numerical modules.
 */
#ifndef MOMENTA_VERIFY_HPP
#define MOMENTA_VERIFY_HPP

#include <string>
#include <vector>

#include "momenta/linalg.hpp"

namespace momenta {

struct InvariantCheck
{
    std::string name;
    double max_residual = 0.0;
    Vec worst_sample;
    int n_samples = 0;
    double tolerance = 0.0;

    bool pass() const { return max_residual <= tolerance; }
    /// Record a residual; keeps the worst sample.
    void observe(double residual, const Vec& sample);
};

struct VerificationReport
{
    std::vector<InvariantCheck> checks;
    std::vector<std::string> notes;

    bool pass() const;
    InvariantCheck& add(const std::string& name, double tolerance);
    /// Throws InputError if absent.
    const InvariantCheck& get(const std::string& name) const;
    bool has(const std::string& name) const;
};

}  // namespace momenta

#endif
