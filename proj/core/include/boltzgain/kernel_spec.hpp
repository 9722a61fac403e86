#pragma once
#include <string>
#include <utility>
#include <vector>

namespace boltzgain {

enum class KernelFamily {
    ClassicalHardSphere,
    RelativisticConstantSigma,
    RelativisticMaxwellian,
};

// Collision-model selector. The Maxwellian variant carries a tabulated angular
// factor F(theta) on [0,pi], evaluated by linear interpolation.
struct KernelSpec {
    KernelFamily family = KernelFamily::ClassicalHardSphere;
    double sigma0 = 1.0;
    std::vector<std::pair<double, double>> f_table; // (theta, F) ascending in theta

    // Test hook: multiplies the deterministic kernel evaluation, never the
    // Monte Carlo oracle. Used to verify that the trust chain catches a
    // corrupted kernel.
    double fault_scale = 1.0;

    static KernelSpec classical_hard_sphere();
    static KernelSpec relativistic_constant(double sigma0);
    static KernelSpec relativistic_maxwellian(std::vector<std::pair<double, double>> table);

    bool relativistic() const { return family != KernelFamily::ClassicalHardSphere; }
    double maxwellian_f(double theta) const;
    std::string name() const;
};

} // namespace boltzgain
