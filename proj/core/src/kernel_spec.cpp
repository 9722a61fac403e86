#include "boltzgain/kernel_spec.hpp"

#include <algorithm>
#include <stdexcept>

namespace boltzgain {

KernelSpec KernelSpec::classical_hard_sphere() {
    return KernelSpec{KernelFamily::ClassicalHardSphere, 0.0, {}, 1.0};
}

KernelSpec KernelSpec::relativistic_constant(double sigma0) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("KernelSpec: sigma0 must be > 0");
    return KernelSpec{KernelFamily::RelativisticConstantSigma, sigma0, {}, 1.0};
}

KernelSpec KernelSpec::relativistic_maxwellian(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) throw std::invalid_argument("KernelSpec: F table needs >= 2 samples");
    for (auto& [th, f] : table)
        if (f < 0.0) throw std::invalid_argument("KernelSpec: tabulated F must be nonnegative");
    if (!std::is_sorted(table.begin(), table.end(),
                        [](auto& a, auto& b) { return a.first < b.first; }))
        throw std::invalid_argument("KernelSpec: F table must be ascending in theta");
    return KernelSpec{KernelFamily::RelativisticMaxwellian, 1.0, std::move(table), 1.0};
}

double KernelSpec::maxwellian_f(double theta) const {
    const auto& t = f_table;
    if (theta <= t.front().first) return t.front().second;
    if (theta >= t.back().first) return t.back().second;
    auto it = std::upper_bound(t.begin(), t.end(), theta,
                               [](double x, auto& e) { return x < e.first; });
    auto lo = *(it - 1);
    auto hi = *it;
    double w = (theta - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

std::string KernelSpec::name() const {
    switch (family) {
        case KernelFamily::ClassicalHardSphere: return "classical-hard-sphere";
        case KernelFamily::RelativisticConstantSigma: return "relativistic-constant-sigma";
        case KernelFamily::RelativisticMaxwellian: return "relativistic-maxwellian";
    }
    return "unknown";
}

} // namespace boltzgain
