#include "boltzgain/classical_collision.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzgain/sphere_quadrature.hpp"

namespace boltzgain {

namespace {
void require_unit(Vec3 n) {
    if (std::abs(norm2(n) - 1.0) > 2e-12)
        throw std::invalid_argument("collision parameter n must be a unit vector");
}
} // namespace

std::pair<Vec3, Vec3> post_collision(Vec3 v, Vec3 w, Vec3 n) {
    require_unit(n);
    double b = dot(n, v - w);
    return {v - b * n, w + b * n};
}

double hard_sphere_B(Vec3 v, Vec3 w, Vec3 n) {
    require_unit(n);
    double b = dot(n, v - w);
    return b > 0.0 ? b : 0.0;
}

bool in_admissible_set(Vec3 v, Vec3 w, Vec3 n, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("in_admissible_set: R must be > 0");
    if (dot(n, v - w) < 0.0) return false;
    if (norm2(w) > R * R) return false;
    auto [vp, wp] = post_collision(v, w, n);
    return norm2(vp) <= R * R && norm2(wp) <= R * R;
}

std::vector<std::pair<Vec3, Vec3>> collision_sphere_points(Vec3 v, Vec3 w, int m) {
    SphereQuadrature sq = make_sphere_quadrature(m);
    std::vector<std::pair<Vec3, Vec3>> out;
    out.reserve(sq.nodes.size());
    for (Vec3 n : sq.nodes) out.push_back(post_collision(v, w, n));
    return out;
}

} // namespace boltzgain
