#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "boltzgain/gain_operator.hpp"
#include "boltzgain/mild_solution.hpp"
#include "boltzgain/rng.hpp"

using namespace boltzgain;

namespace {

InhomogeneousConfig small_config() {
    InhomogeneousConfig cfg;
    cfg.c0 = 1.0;
    cfg.c1 = 1.5;
    cfg.c2 = 1.0;
    cfg.T = 1.0;
    cfg.kernel = KernelSpec::classical_hard_sphere();
    cfg.w_grid_n = 6;
    cfg.sphere_m = 4;
    cfg.n_t = 3;
    cfg.k_max = 3;
    return cfg;
}

// independent single-point implementation of the homogeneous Picard iterates
//   g_{k+1}(t,v) = c0 chi2(v) + chi2(v) int_0^t [gain of g_k(tau,.)](v) dtau
// sharing the evaluator's ladder construction but none of its code path
double homogeneous_picard(const InhomogeneousConfig& cfg, int k, double t, Vec3 v,
                          const std::shared_ptr<const VelocityGrid>& grid,
                          const SphereQuadrature& sq, const std::vector<double>& gl_nodes,
                          const std::vector<double>& gl_weights) {
    if (k == 0) return 0.0;
    if (norm2(v) > cfg.c2 * cfg.c2) return 0.0;
    if (k == 1 || t == 0.0) return cfg.c0;
    double mid = 0.5 * t, hw = 0.5 * t;
    double acc = 0.0;
    for (std::size_t i = 0; i < gl_nodes.size(); ++i) {
        double tau = mid + hw * gl_nodes[i];
        DistributionField G = DistributionField::from_function(grid, [&](Vec3 zeta) {
            return homogeneous_picard(cfg, k - 1, tau, zeta, grid, sq, gl_nodes, gl_weights);
        });
        acc += hw * gl_weights[i] * gain_apply(G, cfg.kernel, sq, v);
    }
    return cfg.c0 + acc;
}

} // namespace

TEST_CASE("eval_phi: closed balls") {
    InhomogeneousConfig cfg = small_config();
    CHECK(eval_phi({0, 0, 0}, {0, 0, 0}, cfg) == cfg.c0);
    CHECK(eval_phi({cfg.c1 + 1e-9, 0, 0}, {0, 0, 0}, cfg) == 0.0);
    CHECK(eval_phi({cfg.c1, 0, 0}, {0, 0, 0}, cfg) == cfg.c0); // boundary included
    CHECK(eval_phi({0, 0, 0}, {0, 0, cfg.c2}, cfg) == cfg.c0);
    CHECK(eval_phi({0, 0, 0}, {0, 0, cfg.c2 + 1e-9}, cfg) == 0.0);
}

TEST_CASE("config invariant: c1 > T c2 enforced") {
    InhomogeneousConfig cfg = small_config();
    cfg.c1 = 0.9; // violates c1 > T c2 = 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(PicardEvaluator{cfg}, std::invalid_argument);
}

TEST_CASE("eval_picard: base cases") {
    PicardEvaluator ev(small_config());
    const InhomogeneousConfig& cfg = ev.config();

    CHECK(ev.eval(0, 0.3, {0, 0, 0}, {0, 0, 0}) == 0.0);
    // k=1 free streaming
    Vec3 x{0.2, 0.0, 0.0}, v{0.5, 0.0, 0.0};
    CHECK(ev.eval(1, 0.5, x, v) == cfg.c0);
    Vec3 far{1.4, 0, 0};
    CHECK(ev.eval(1, 0.5, far, {-0.9, 0, 0}) == 0.0); // foot outside chi1
    // velocity support
    CHECK(ev.eval(3, 0.5, x, {1.1, 0, 0}) == 0.0);
    // t = 0 reduces to phi for every k
    for (int k : {1, 2, 3}) CHECK(ev.eval(k, 0.0, x, v) == eval_phi(x, v, cfg));
    // depth error
    CHECK_THROWS_AS(ev.eval(4, 0.1, x, v), std::out_of_range);
    CHECK_THROWS_AS(ev.eval(2, 2.0, x, v), std::domain_error);
}

TEST_CASE("eval_picard: iterates grow monotonically") {
    PicardEvaluator ev(small_config());
    CounterRng rng{41, 0, 0};
    for (int i = 0; i < 10; ++i) {
        Vec3 x = rng.ball(1.2), v = rng.ball(1.0);
        double t = 0.2 + 0.5 * rng.uniform();
        double f1 = ev.eval(1, t, x, v);
        double f2 = ev.eval(2, t, x, v);
        double f3 = ev.eval(3, t, x, v);
        CHECK(f2 >= f1);
        CHECK(f3 >= f2);
    }
    // strictly increasing at the center
    double g2 = ev.eval(2, 0.5, {0, 0, 0}, {0, 0, 0});
    double g3 = ev.eval(3, 0.5, {0, 0, 0}, {0, 0, 0});
    CHECK(g2 > ev.config().c0);
    CHECK(g3 > g2);
}

TEST_CASE("eval_picard: spatial support grows at most linearly") {
    PicardEvaluator ev(small_config());
    const InhomogeneousConfig& cfg = ev.config();
    CounterRng rng{43, 0, 0};
    for (int i = 0; i < 20; ++i) {
        double t = 0.8 * rng.uniform();
        Vec3 dir = rng.unit_sphere();
        Vec3 x = (cfg.c1 + t * cfg.c2 + 1e-6 + rng.uniform()) * dir;
        Vec3 v = rng.ball(cfg.c2);
        CHECK(ev.eval(3, t, x, v) == 0.0);
    }
}

TEST_CASE("shrinking ball: k=1 exactly zero, k=3 exact homogeneity") {
    PicardEvaluator ev(small_config());
    CHECK(check_shrinking_ball(ev, 1, 0.5, 25, 7) == 0.0);
    double d3 = check_shrinking_ball(ev, 3, 0.5, 25, 7);
    double scale = ev.config().c0;
    CHECK(d3 <= 1e-12 * scale * 100.0);
    CHECK(d3 == 0.0); // the discrete argument transfers exactly
}

TEST_CASE("shrinking ball: negative control outside the hypothesis") {
    PicardEvaluator ev(small_config());
    const InhomogeneousConfig& cfg = ev.config();
    double t = 0.75;
    // |x| = c1 - t c2 / 2, outside the shrinking ball c1 - t c2
    Vec3 x_out{cfg.c1 - t * cfg.c2 / 2.0, 0.0, 0.0};
    Vec3 v{-0.9, 0, 0}; // free-streams x_out outside chi1 but keeps the origin inside
    double d2 = std::abs(ev.eval(2, t, x_out, v) - ev.eval(2, t, {0, 0, 0}, v));
    CHECK(d2 > 1e-6);
}

TEST_CASE("eval_picard: agrees with the independent homogeneous implementation") {
    InhomogeneousConfig cfg = small_config();
    PicardEvaluator ev(cfg);
    auto grid = make_velocity_grid(cfg.c2, cfg.w_grid_n);
    SphereQuadrature sq = make_sphere_quadrature(cfg.sphere_m);
    std::vector<double> nodes, weights;
    gauss_legendre(cfg.n_t, nodes, weights);

    CounterRng rng{47, 0, 0};
    for (int i = 0; i < 4; ++i) {
        double t = 0.2 + 0.5 * rng.uniform();
        Vec3 v = rng.ball(cfg.c2 * 0.9);
        double a = ev.eval(cfg.k_max, t, {0, 0, 0}, v);
        double b = homogeneous_picard(cfg, cfg.k_max, t, v, grid, sq, nodes, weights);
        CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(b)));
    }
}

TEST_CASE("reduced_homogeneous_blowup: branches") {
    InhomogeneousConfig cfg = small_config();
    auto grid = make_velocity_grid(cfg.c2, 8);
    SphereQuadrature sq = make_sphere_quadrature(4);
    IntegrationControls c;

    // large c0: detection within the horizon
    cfg.c0 = 10.0;
    ReducedBlowupResult big = reduced_homogeneous_blowup(cfg, grid, sq, c);
    CHECK(big.delta > 0.0);
    CHECK(big.predicted_within_horizon);
    CHECK(big.report.detected);
    CHECK(big.report.t_detect <= big.predicted_bound);
    CHECK(big.branch == "c0-large");

    // small c0 with enlarged c1 and horizon
    InhomogeneousConfig slow = cfg;
    slow.c0 = 0.05;
    ReducedBlowupResult pre = reduced_homogeneous_blowup(slow, grid, sq, c);
    double need_T = 1.2 * pre.predicted_bound;
    slow.T = need_T;
    slow.c1 = 1.1 * need_T * slow.c2;
    ReducedBlowupResult lng = reduced_homogeneous_blowup(slow, grid, sq, c);
    CHECK(lng.predicted_within_horizon);
    CHECK(lng.report.detected);
    CHECK(lng.branch == "c1-large");

    // tiny c0, small c1: no detection within T
    InhomogeneousConfig none = cfg;
    none.c0 = 1e-3;
    none.T = 1.0;
    none.c1 = 1.5;
    ReducedBlowupResult no = reduced_homogeneous_blowup(none, grid, sq, c);
    CHECK_FALSE(no.predicted_within_horizon);
    CHECK_FALSE(no.report.detected);
    CHECK(no.branch == "none");
}
