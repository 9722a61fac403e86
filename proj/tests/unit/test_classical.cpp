#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "boltzgain/classical_collision.hpp"
#include "boltzgain/rng.hpp"

using namespace boltzgain;

TEST_CASE("post_collision: head-on exchange") {
    auto [vp, wp] = post_collision({1, 0, 0}, {-1, 0, 0}, {1, 0, 0});
    CHECK(vp == Vec3{-1, 0, 0});
    CHECK(wp == Vec3{1, 0, 0});
}

TEST_CASE("post_collision: zero relative velocity is a fixed point") {
    Vec3 v{0.3, -0.2, 0.5};
    for (Vec3 n : {Vec3{1, 0, 0}, Vec3{0, 0, 1}, Vec3{0.6, 0.8, 0.0}}) {
        auto [vp, wp] = post_collision(v, v, n);
        CHECK(vp == v);
        CHECK(wp == v);
    }
}

TEST_CASE("post_collision: conservation on a generic pair") {
    Vec3 v{1, 2, 3}, w{0, -1, 1}, n{0, 0, 1};
    auto [vp, wp] = post_collision(v, w, n);
    Vec3 dp = (vp + wp) - (v + w);
    CHECK(std::abs(dp.x) <= 1e-12);
    CHECK(std::abs(dp.y) <= 1e-12);
    CHECK(std::abs(dp.z) <= 1e-12);
    double e0 = norm2(v) + norm2(w), e1 = norm2(vp) + norm2(wp);
    CHECK(std::abs(e1 - e0) <= 1e-11 * e0);
}

TEST_CASE("post_collision: rejects non-unit n") {
    CHECK_THROWS_AS(post_collision({1, 0, 0}, {0, 0, 0}, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("hard_sphere_B: aligned, masked, projection") {
    CHECK(hard_sphere_B({1, 0, 0}, {0, 0, 0}, {1, 0, 0}) == 1.0);
    CHECK(hard_sphere_B({1, 0, 0}, {0, 0, 0}, {-1, 0, 0}) == 0.0);
    CHECK(hard_sphere_B({1, 1, 0}, {0, 0, 0}, {1, 0, 0}) == 1.0);
}

TEST_CASE("in_admissible_set: examples") {
    CHECK(in_admissible_set({0, 0, 0}, {0, 0, 0}, {0, 0, 1}, 1.0));
    CHECK(in_admissible_set({0.9, 0, 0}, {-0.9, 0, 0}, {1, 0, 0}, 1.0));
    // v' lands at the origin but w' inherits the 1.2 speed
    CHECK_FALSE(in_admissible_set({1.2, 0, 0}, {0, 0, 0}, {1, 0, 0}, 1.0));
    CHECK_THROWS_AS(in_admissible_set({0, 0, 0}, {0, 0, 0}, {0, 0, 1}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("in_admissible_set: monotone in R") {
    CounterRng rng{2024, 0, 0};
    for (int i = 0; i < 200; ++i) {
        double R = 0.5 + rng.uniform();
        Vec3 v = rng.ball(R), w = rng.ball(2.0), n = rng.unit_sphere();
        if (in_admissible_set(v, w, n, R)) CHECK(in_admissible_set(v, w, n, R * 1.5));
    }
}

TEST_CASE("collision_sphere_points: degenerate and sphere membership") {
    Vec3 v{0.4, 0.1, -0.3};
    for (auto& [a, b] : collision_sphere_points(v, v, 4)) {
        CHECK(a == v);
        CHECK(b == v);
    }

    auto pts = collision_sphere_points({1, 0, 0}, {-1, 0, 0}, 8);
    REQUIRE(pts.size() == 64);
    for (auto& [a, b] : pts) {
        CHECK(std::abs(norm(a) - 1.0) <= 1e-12);
        CHECK(std::abs(norm(b) - 1.0) <= 1e-12);
    }

    Vec3 v2{0.2, 0.7, -0.1}, w2{-0.4, 0.3, 0.9};
    Vec3 mid = 0.5 * (v2 + w2);
    for (auto& [a, b] : collision_sphere_points(v2, w2, 6)) {
        Vec3 m = 0.5 * (a + b);
        CHECK(std::abs(m.x - mid.x) <= 1e-12);
        CHECK(std::abs(m.y - mid.y) <= 1e-12);
        CHECK(std::abs(m.z - mid.z) <= 1e-12);
        CHECK(std::abs(norm(a - mid) - norm(b - mid)) <= 1e-12);
    }
}

TEST_CASE("classical properties: conservation, involution, Galilean shift") {
    CounterRng rng{7, 0, 0};
    double worst_p = 0.0, worst_e = 0.0, worst_inv = 0.0, worst_gal = 0.0;
    for (int i = 0; i < 20000; ++i) {
        Vec3 v = 10.0 * rng.ball(1.0), w = 10.0 * rng.ball(1.0), n = rng.unit_sphere();
        auto [vp, wp] = post_collision(v, w, n);

        Vec3 dp = (vp + wp) - (v + w);
        worst_p = std::max({worst_p, std::abs(dp.x), std::abs(dp.y), std::abs(dp.z)});
        double e0 = norm2(v) + norm2(w);
        worst_e = std::max(worst_e, std::abs(norm2(vp) + norm2(wp) - e0) / (e0 + 1e-300));

        auto [v2, w2] = post_collision(vp, wp, n);
        worst_inv = std::max({worst_inv, norm(v2 - v), norm(w2 - w)});

        Vec3 u = 5.0 * rng.ball(1.0);
        auto [vs, ws] = post_collision(v + u, w + u, n);
        worst_gal = std::max({worst_gal, norm(vs - (vp + u)), norm(ws - (wp + u))});
    }
    CHECK(worst_p <= 1e-12);
    CHECK(worst_e <= 1e-11);
    CHECK(worst_inv <= 1e-12);
    CHECK(worst_gal <= 1e-12);
}
