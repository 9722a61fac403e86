#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "boltzgain/homogeneous_dynamics.hpp"
#include "boltzgain/rng.hpp"

using namespace boltzgain;

namespace {
const KernelSpec kHS = KernelSpec::classical_hard_sphere();

IntegrationControls quick_controls() {
    IntegrationControls c;
    c.local_err_tol = 1e-13;
    return c;
}
} // namespace

TEST_CASE("comparison_solution: closed form and domain") {
    ComparisonState a{1.0, 1.0};
    CHECK(comparison_solution(a, 0.0) == 1.0);
    CHECK(comparison_solution(a, 0.5) == doctest::Approx(2.0).epsilon(1e-15));

    ComparisonState b{3.0, 2.0};
    CHECK(b.blowup_time() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(comparison_solution(b, 1.0 / 6.0 - 1e-9) > 1e8);
    CHECK_THROWS_AS(comparison_solution(b, 1.0 / 6.0), std::domain_error);
    CHECK_THROWS_AS(comparison_solution(b, 1.0), std::domain_error);
}

TEST_CASE("evolve_truncated: detection, comparison domination, exact form preservation") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    EvolveResult r = evolve_truncated(1.0, 1.0, kHS, grid, sq, 10.0, quick_controls());
    const ComparisonState& cs = r.trajectory.comparison_state;
    REQUIRE(cs.delta > 0.0);

    CHECK(r.report.detected);
    CHECK(r.report.t_detect <= 1.1 * cs.blowup_time());
    CHECK(r.report.final_sup_norm >= r.report.threshold);
    CHECK(r.trajectory.worst_form_gap() <= 1e-12);

    // trajectory dominates the exact comparison solution within 1e-6 relative
    double worst = 0.0;
    for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
        double comp = r.trajectory.comparison[i];
        if (!std::isfinite(comp)) continue;
        worst = std::max(worst, (comp - r.trajectory.sup_norm[i]) / comp);
    }
    CHECK(worst <= 1e-6);

    // monotone growth of the sup norm
    for (std::size_t i = 1; i < r.trajectory.times.size(); ++i)
        CHECK(r.trajectory.sup_norm[i] >= r.trajectory.sup_norm[i - 1]);
}

TEST_CASE("evolve_truncated: short horizon stays within 1% of the comparison") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    // first find delta, then pick a horizon well before the pole
    EvolveResult probe = evolve_truncated(1.0, 1.0, kHS, grid, sq, 1e-6, quick_controls());
    double delta = probe.trajectory.comparison_state.delta;
    double horizon = 0.05 / delta; // delta rho0 t = 0.05 << 1
    EvolveResult r = evolve_truncated(1.0, 1.0, kHS, grid, sq, horizon, quick_controls());
    CHECK_FALSE(r.report.detected);
    for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
        double comp = r.trajectory.comparison[i];
        CHECK(std::abs(r.trajectory.sup_norm[i] - comp) <= 0.01 * comp);
    }
}

TEST_CASE("evolve_truncated: zero initial height never detects") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    EvolveResult r = evolve_truncated(0.0, 1.0, kHS, grid, sq, 0.5, quick_controls());
    CHECK_FALSE(r.report.detected);
    for (double s : r.trajectory.sup_norm) CHECK(s == 0.0);
}

TEST_CASE("evolve_truncated: halving the initial step moves detection by < 1%") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    IntegrationControls c = quick_controls();
    EvolveResult a = evolve_truncated(1.0, 1.0, kHS, grid, sq, 10.0, c);
    double delta = a.trajectory.comparison_state.delta;
    c.dt_init = 0.005 / delta; // half the default 0.01/(delta rho0)
    EvolveResult b = evolve_truncated(1.0, 1.0, kHS, grid, sq, 10.0, c);
    REQUIRE(a.report.detected);
    REQUIRE(b.report.detected);
    CHECK(std::abs(a.report.t_detect - b.report.t_detect) < 0.01 * a.report.t_detect);
}

TEST_CASE("co_evolve: Lemma 3 domination and the swapped negative control") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    DistributionField f0 = DistributionField::ball_mask(grid, 1.0, 1.0);
    IntegrationControls c;
    c.local_err_tol = 0.0; // domination needs lock-step consistency, not accuracy
    CoEvolveResult r = co_evolve(f0, 1.0, 1.0, kHS, sq, 10.0, c);

    CHECK(check_domination(r.full.trajectory, r.truncated.trajectory));
    // the swap direction must fail once the trajectories separate
    CHECK_FALSE(check_domination(r.truncated.trajectory, r.full.trajectory));
    // full blows up no later than truncated is detected (it dominates)
    CHECK(r.full.report.detected);

    // mismatched grids are rejected
    auto other = make_velocity_grid(1.0, 8);
    Trajectory t2 = r.truncated.trajectory;
    t2.grid = other;
    CHECK_THROWS_AS(check_domination(r.full.trajectory, t2), std::invalid_argument);
}

TEST_CASE("co_evolve_full_pair: comparison principle for ordered data") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    DistributionField lo = DistributionField::ball_mask(grid, 1.0, 1.0);
    DistributionField hi = DistributionField::ball_mask(grid, 1.0, 2.0);
    IntegrationControls c;
    c.local_err_tol = 0.0;
    CoEvolveResult r = co_evolve_full_pair(hi, lo, 1.0, 1.0, kHS, sq, 10.0, c);
    REQUIRE(r.full.trajectory.times == r.truncated.trajectory.times);
    for (std::size_t k = 0; k < r.full.trajectory.times.size(); ++k) {
        const auto& fhi = r.full.trajectory.fields[k];
        const auto& flo = r.truncated.trajectory.fields[k];
        for (std::size_t i = 0; i < fhi.size(); ++i) CHECK(fhi[i] >= flo[i] - 1e-12 * (1.0 + flo[i]));
    }
}

TEST_CASE("evolve_full_homogeneous: isotropy is preserved along the trajectory") {
    auto grid = make_velocity_grid(1.0, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    DistributionField f0 = DistributionField::ball_mask(grid, 1.0, 1.0);
    IntegrationControls c;
    c.local_err_tol = 0.0;
    EvolveResult r = evolve_full_homogeneous(f0, 1.0, 1.0, kHS, sq, 10.0, c);
    REQUIRE(r.report.detected);
    const auto& last = r.trajectory.fields.back();
    for (std::size_t i = 0; i < grid->node_count(); ++i) {
        // exact equality on the z-axis symmetry subgroup orbits
        CHECK(last[i] == last[std::size_t(grid->rep_of[i])]);
    }

    CHECK_THROWS_AS(
        evolve_full_homogeneous(DistributionField(grid), 1.0, 1.0, kHS, sq, 1.0, c),
        std::invalid_argument); // zero field cannot dominate rho0 = 1
}
