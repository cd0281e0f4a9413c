#include "momenta/verify.hpp"

#include <cmath>

namespace momenta {

void InvariantCheck::observe(double residual, const Vec& sample)
{
    ++n_samples;
    if (std::isnan(residual))
        residual = INFINITY;
    if (n_samples == 1 || residual > max_residual)
    {
        max_residual = residual;
        worst_sample = sample;
    }
}

bool VerificationReport::pass() const
{
    for (const auto& c : checks)
        if (!c.pass())
            return false;
    return true;
}

InvariantCheck& VerificationReport::add(const std::string& name, double tolerance)
{
    checks.push_back(InvariantCheck{name, 0.0, Vec(), 0, tolerance});
    return checks.back();
}

const InvariantCheck& VerificationReport::get(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return c;
    throw InputError("no check named " + name);
}

bool VerificationReport::has(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return true;
    return false;
}

}  // namespace momenta
