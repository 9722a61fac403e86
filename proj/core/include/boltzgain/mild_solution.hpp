#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>
#include "boltzgain/homogeneous_dynamics.hpp"
#include "boltzgain/kernel_spec.hpp"
#include "boltzgain/sphere_quadrature.hpp"
#include "boltzgain/vec3.hpp"
#include "boltzgain/velocity_grid.hpp"

namespace boltzgain {

// Initial data phi(x,v) = c0 chi_{|x|<=c1} chi_{|v|<=c2} and the quadrature
// resolutions for the Picard iterates of the velocity-truncated problem.
struct InhomogeneousConfig {
    double c0 = 1.0;
    double c1 = 1.5;
    double c2 = 1.0;
    double T = 1.0;
    KernelSpec kernel = KernelSpec::classical_hard_sphere();
    int sphere_m = 4;
    int w_grid_n = 6;
    int n_t = 3;
    int k_max = 3;

    void validate() const; // positivity and the Lemma-5 hypothesis c1 > T c2
};

double eval_phi(Vec3 x, Vec3 v, const InhomogeneousConfig& cfg);

// On-demand recursive evaluator of the iterates f_k(t,x,v):
//   f_0 = 0,
//   f_{k+1}(t,x,v) = c0 chi1(x-tv) chi2(v)
//                  + chi2(v) int_0^t [gain of f_k(tau, x-(t-tau)v, .)](v) dtau.
// The time integral uses composite Gauss-Legendre with n_t nodes per unit time,
// rescaled from one canonical node set, so the ladder depends only on t. Inner
// velocity fields f_k(tau, x', .) are sampled on the shared grid and memoized
// by (k, tau, x'); the closed-form k=1 fields are rebuilt on the fly.
class PicardEvaluator {
public:
    explicit PicardEvaluator(InhomogeneousConfig cfg);
    ~PicardEvaluator();
    PicardEvaluator(const PicardEvaluator&) = delete;
    PicardEvaluator& operator=(const PicardEvaluator&) = delete;

    const InhomogeneousConfig& config() const;
    double eval(int k, double t, Vec3 x, Vec3 v); // thread-safe
    std::size_t memo_entries() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

double eval_picard(int k, double t, Vec3 x, Vec3 v, PicardEvaluator& ev);

struct ShrinkingBallSample {
    Vec3 x, y, v;
    double f_x = 0.0, f_y = 0.0;
    double discrepancy = 0.0;
};

// Draws pseudorandom (x,y,v) with |x|,|y| <= c1 - t c2 and |v| <= c2 and
// returns the per-sample values; the homogeneity argument transfers exactly to
// the discretization, so the discrepancies are zero up to roundoff.
std::vector<ShrinkingBallSample> check_shrinking_ball_detailed(PicardEvaluator& ev, int k,
                                                               double t, int samples,
                                                               std::uint64_t seed,
                                                               unsigned threads = 1);

double check_shrinking_ball(PicardEvaluator& ev, int k, double t, int samples,
                            std::uint64_t seed, unsigned threads = 1);

// Reduction of the inhomogeneous problem to the truncated homogeneous one
// (R = c2, rho0 = c0) plus the blowup-time bookkeeping.
struct ReducedBlowupResult {
    BlowupReport report;
    double delta = 0.0;
    double predicted_bound = 0.0;        // (1 + margin) / (delta c0)
    bool predicted_within_horizon = false;
    std::string branch;                  // "c0-large", "c1-large" or "none"
};

ReducedBlowupResult reduced_homogeneous_blowup(const InhomogeneousConfig& cfg,
                                               std::shared_ptr<const VelocityGrid> grid,
                                               const SphereQuadrature& sq,
                                               const IntegrationControls& controls);

} // namespace boltzgain
