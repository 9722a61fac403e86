#pragma once
#include <memory>
#include <vector>
#include "boltzgain/kernel_spec.hpp"
#include "boltzgain/sphere_quadrature.hpp"
#include "boltzgain/vec3.hpp"
#include "boltzgain/velocity_grid.hpp"

namespace boltzgain {

// Lemma-1 constants with the quadrature metadata that produced them.
struct DeltaEstimate {
    double delta = 0.0;   // positive lower bound of the gain on the mask
    double lambda = 1.0;  // probe-ball inflation factor, >= 1
    double R = 1.0;
    int grid_n = 0;
    int sphere_m = 0;
    KernelSpec kernel;
    Vec3 argmin{};        // probe attaining the minimum
};

// Direct quadrature of the gain term at a single velocity/momentum v:
//   sum_w sum_n  h^3 w_n B(...) f(v') f(w')
// w runs over the nodes of f's grid, n over the sphere quadrature, f is
// evaluated at post-collisional points by trilinear interpolation with zero
// extension. The field is normalized by its maximum before summation and the
// square of the scale is applied afterwards, so scaling f by c scales the
// result by exactly c^2 whenever the scaled node values are exact.
double gain_apply(const DistributionField& f, const KernelSpec& kernel,
                  const SphereQuadrature& sq, Vec3 v);

// gain_apply evaluated at every grid node. When the sphere rule, the kernel and
// the field are all invariant under the grid's z-axis signed-permutation
// subgroup, only orbit representatives are evaluated and the values mirrored.
std::vector<double> gain_field(const DistributionField& f, const KernelSpec& kernel,
                               const SphereQuadrature& sq, unsigned threads = 1);

// Truncated operator Q_R: constant on the ball (the nodewise infimum of the
// gain over |v| <= R), zero outside.
DistributionField q_r_apply(const DistributionField& f, double R, const KernelSpec& kernel,
                            const SphereQuadrature& sq, unsigned threads = 1);

// Monotonicity of the gain: f >= g >= 0 nodewise implies Q+(f,f) >= Q+(g,g).
bool check_monotone(const DistributionField& f, const DistributionField& g,
                    const KernelSpec& kernel, const SphereQuadrature& sq,
                    unsigned threads = 1);

// Minimum of the gain of the unit ball mask chi_{B_R} over all lattice probes
// with |v| <= lambda R (the f grid's lattice extended beyond R, so probe sets
// are nested as lambda grows). Throws if the minimum is not positive, which
// signals lambda chosen too large or a resolution too coarse to resolve the
// admissible set.
DeltaEstimate estimate_delta(double R, double lambda, const KernelSpec& kernel,
                             int grid_n, int sphere_m, unsigned threads = 1);

// Same minimum for a list of lambdas in one pass, without the positivity
// requirement; used for sweep diagnostics. Returns (lambda, min value) pairs.
std::vector<std::pair<double, double>> delta_profile(double R, const std::vector<double>& lambdas,
                                                     const KernelSpec& kernel, int grid_n,
                                                     int sphere_m, unsigned threads = 1);

// Field-level gain evaluation with a single-slot cache on the normalized input.
// The truncated dynamics evolves exact multiples of one mask, so every step
// after the first reuses the cached unit-gain values.
class CachedGainField {
public:
    CachedGainField(std::shared_ptr<const VelocityGrid> grid, KernelSpec kernel,
                    SphereQuadrature sq, unsigned threads);
    ~CachedGainField();
    CachedGainField(const CachedGainField&) = delete;
    CachedGainField& operator=(const CachedGainField&) = delete;

    // per-node gain values of f; valid until the next call
    const std::vector<double>& evaluate(const DistributionField& f);
    std::size_t cache_hits() const { return hits_; }
    std::size_t cache_misses() const { return misses_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t hits_ = 0, misses_ = 0;
};

} // namespace boltzgain
