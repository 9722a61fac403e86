#pragma once
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>
#include "boltzgain/gain_operator.hpp"
#include "boltzgain/kernel_spec.hpp"
#include "boltzgain/sphere_quadrature.hpp"
#include "boltzgain/velocity_grid.hpp"

namespace boltzgain {

// Exact solution of d rho/dt = delta rho^2, rho(0) = rho0: the comparison
// solution every gain-only trajectory must dominate.
struct ComparisonState {
    double rho0 = 1.0;
    double delta = 1.0;
    double blowup_time() const {
        double d = delta * rho0;
        return d > 0.0 ? 1.0 / d : std::numeric_limits<double>::infinity();
    }
};

double comparison_solution(const ComparisonState& cs, double t);

struct BlowupReport {
    bool detected = false;
    double t_detect = 0.0;
    double threshold = 0.0;
    double final_sup_norm = 0.0;
    long steps = 0;
    double dt_final = 0.0;
};

// Raised when the step size underflows before either the threshold is crossed
// or the horizon is reached; distinct from a (non-)detection outcome.
struct InconclusiveRunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationControls {
    double increment_cap = 0.10;   // halve when sup grows more than this per step
    double local_err_tol = 1e-13;  // step-doubling relative error bound; 0 disables
    double dt_min = 1e-12;
    double threshold_factor = 1e6; // detect blowup at threshold_factor * rho0
    double dt_init = 0.0;          // 0: use 0.01 / (delta rho0)
    double dt_growth = 1.25;
    bool store_fields = true;
    unsigned threads = 1;
};

struct Trajectory {
    std::shared_ptr<const VelocityGrid> grid;
    double ball_radius = 0.0; // the B_R of the run
    ComparisonState comparison_state;
    std::vector<double> times;
    std::vector<double> sup_norm;
    std::vector<double> min_on_ball;
    std::vector<double> max_on_ball;
    std::vector<double> comparison; // +inf at/after the comparison pole
    std::vector<std::vector<double>> fields; // node values, if stored

    // Lemma-4 form gap: max - min over ball nodes, largest over all steps,
    // relative to the height at that step
    double worst_form_gap() const;
};

struct EvolveResult {
    Trajectory trajectory;
    BlowupReport report;
};

// d/dt f = Q_R(f,f), f(0) = rho0 chi_{B_R}, explicit RK4 with increment-capped
// and optionally error-controlled step halving.
EvolveResult evolve_truncated(double rho0, double R, const KernelSpec& kernel,
                              std::shared_ptr<const VelocityGrid> grid,
                              const SphereQuadrature& sq, double t_end,
                              const IntegrationControls& controls);

// d/dt f = Q+(f,f) on the grid (contributions landing outside the grid ball are
// dropped). Requires f0 >= rho0 chi_{B_R} nodewise.
EvolveResult evolve_full_homogeneous(const DistributionField& f0, double rho0, double R,
                                     const KernelSpec& kernel, const SphereQuadrature& sq,
                                     double t_end, const IntegrationControls& controls);

// Lock-step co-integration of the full and truncated systems on shared time
// stamps (the pair is advanced with one step-size decision, so Lemma-3
// domination can be checked at every accepted time).
struct CoEvolveResult {
    EvolveResult full;
    EvolveResult truncated;
};

CoEvolveResult co_evolve(const DistributionField& f0, double rho0, double R,
                         const KernelSpec& kernel, const SphereQuadrature& sq, double t_end,
                         const IntegrationControls& controls);

// Lock-step co-integration of two full trajectories (comparison-principle checks).
CoEvolveResult co_evolve_full_pair(const DistributionField& f0_upper,
                                   const DistributionField& f0_lower, double rho0, double R,
                                   const KernelSpec& kernel, const SphereQuadrature& sq,
                                   double t_end, const IntegrationControls& controls);

// true iff full >= truncated - 1e-9 (1 + ||truncated||_inf) nodewise at every
// shared time; requires both trajectories to carry fields on the same grid and
// identical time stamps
bool check_domination(const Trajectory& full, const Trajectory& truncated);

} // namespace boltzgain
