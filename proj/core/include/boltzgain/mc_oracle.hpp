#pragma once
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>
#include "boltzgain/kernel_spec.hpp"
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// Monte Carlo estimate with explicit provenance. std_error is the sample
// standard deviation divided by sqrt(samples).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    std::string generator = "splitmix64-counter";
};

// A callable field together with the ball that bounds the integration domain
// of the collision partner.
struct McField {
    double radius = 1.0;
    std::function<double(Vec3)> f;

    static McField sharp_ball(double R, double height = 1.0) {
        return {R, [R, height](Vec3 x) { return norm2(x) <= R * R ? height : 0.0; }};
    }
};

struct FormMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform sampling of (w, n) over ball x sphere; the kernel formulas are
// re-transcribed here from scratch and share nothing with the deterministic
// quadrature path beyond Vec3 arithmetic.
McEstimate mc_gain(const McField& f, const KernelSpec& kernel, Vec3 v, long samples,
                   std::uint64_t seed, unsigned threads = 1,
                   std::uint64_t stream_base = 0);

// test-only variant taking an arbitrary classical kernel B(v, w, n)
McEstimate mc_gain_classical_kernel(const McField& f,
                                    const std::function<double(Vec3, Vec3, Vec3)>& B, Vec3 v,
                                    long samples, std::uint64_t seed, unsigned threads = 1);

// Minimum of mc_gain over low-discrepancy probes in the closed ball of radius
// lambda R (half of them on the bounding sphere, where the continuum minimum
// lives). std_error reports the largest per-probe standard error.
McEstimate mc_delta(double R, double lambda, const KernelSpec& kernel, long samples_per_v,
                    int v_probes, std::uint64_t seed, unsigned threads = 1);

// The relativistic gain at p evaluated through both printed representations
// (center-of-mass form with B(g,theta)/(p0 q0), and the omega form with
// k dw dq) over the same q ball. Throws FormMismatchError beyond 5 combined
// standard errors; this is the numerical adjudication of the omega-form
// normalization and of the dq measure reading.
std::pair<McEstimate, McEstimate> mc_form_equivalence(Vec3 p, const McField& test_f,
                                                      long samples, std::uint64_t seed,
                                                      double sigma0 = 1.0,
                                                      unsigned threads = 1);

} // namespace boltzgain
