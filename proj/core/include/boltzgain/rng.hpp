#pragma once
#include <cstdint>
#include <cmath>
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// Counter-based generator: splitmix64 finalizer applied to (seed, stream, counter).
// Every draw is a pure function of its coordinates, so sample i is identical no
// matter which thread computes it or in which order.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    static constexpr const char* name() { return "splitmix64-counter"; }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t next_u64() {
        std::uint64_t key = mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
        return mix(key + counter++);
    }

    // uniform in [0,1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller pair; fixed draw count per call
    void normal_pair(double& a, double& b) {
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-63));
        a = r * std::cos(6.283185307179586476925287 * u2);
        b = r * std::sin(6.283185307179586476925287 * u2);
    }

    Vec3 unit_sphere() {
        double ct = 2.0 * uniform() - 1.0;
        double phi = 6.283185307179586476925287 * uniform();
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        return {st * std::cos(phi), st * std::sin(phi), ct};
    }

    Vec3 ball(double radius) {
        Vec3 dir = unit_sphere();
        double r = radius * std::cbrt(uniform());
        return r * dir;
    }
};

} // namespace boltzgain
