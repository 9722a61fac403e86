#include "boltzgain/relativistic_collision.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzgain/sphere_quadrature.hpp"

namespace boltzgain {

namespace {
void require_unit(Vec3 n) {
    if (std::abs(norm2(n) - 1.0) > 2e-12)
        throw std::invalid_argument("collision parameter omega must be a unit vector");
}
} // namespace

double energy(Vec3 p) { return std::sqrt(1.0 + norm2(p)); }

InvariantPair invariants_sg(Vec3 p, Vec3 q) {
    if (!is_finite(p) || !is_finite(q))
        throw std::invalid_argument("invariants_sg: momenta must be finite");
    double p0 = energy(p), q0 = energy(q);
    double s = (p0 + q0) * (p0 + q0) - norm2(p + q);
    double rad = norm2(p - q) - (p0 - q0) * (p0 - q0);
    if (rad < -1e-12)
        throw std::runtime_error("invariants_sg: negative radicand, inconsistent inputs");
    double g = 0.5 * std::sqrt(std::max(0.0, rad));
    return {s, g};
}

double scattering_cos_raw(FourMomentum p, FourMomentum q, FourMomentum p_post,
                          FourMomentum q_post) {
    double num = (p.p0 - q.p0) * (p_post.p0 - q_post.p0) - dot(p.p - q.p, p_post.p - q_post.p);
    double den = (p.p0 - q.p0) * (p.p0 - q.p0) - norm2(p.p - q.p);
    if (std::abs(den) < 1e-14)
        throw std::invalid_argument("scattering_angle: degenerate collision p = q");
    return 1.0 - 2.0 * num / den;
}

double scattering_angle(FourMomentum p, FourMomentum q, FourMomentum p_post,
                        FourMomentum q_post) {
    double c = scattering_cos_raw(p, q, p_post, q_post);
    c = std::min(1.0, std::max(-1.0, c));
    return std::acos(c);
}

double kernel_B(double g, double theta, const KernelSpec& spec) {
    if (!(g >= 0.0)) throw std::invalid_argument("kernel_B: g must be >= 0");
    if (!spec.relativistic())
        throw std::invalid_argument("kernel_B: classical spec passed to relativistic kernel");
    double s = 4.0 * (1.0 + g * g);
    double B;
    if (spec.family == KernelFamily::RelativisticConstantSigma) {
        B = g * std::sqrt(s) * spec.sigma0 / 2.0;
    } else {
        // sigma = F(theta) sqrt(1+g^2) / g; the g cancels against B's prefactor
        B = std::sqrt(s) / 2.0 * std::sqrt(1.0 + g * g) * spec.maxwellian_f(theta);
    }
    return B * spec.fault_scale;
}

double offset_a(Vec3 p, Vec3 q, Vec3 omega) {
    require_unit(omega);
    double p0 = energy(p), q0 = energy(q);
    double e = p0 + q0;
    Vec3 rel = q / q0 - p / p0;
    double we = dot(omega, p + q);
    return 2.0 * e * p0 * q0 * dot(omega, rel) / (e * e - we * we);
}

RelativisticCollision post_collision_rel(Vec3 p, Vec3 q, Vec3 omega) {
    require_unit(omega);
    RelativisticCollision c;
    c.p = FourMomentum::from_spatial(p);
    c.q = FourMomentum::from_spatial(q);
    c.omega = omega;
    c.a = offset_a(p, q, omega);
    c.p_post = FourMomentum::from_spatial(p + c.a * omega);
    c.q_post = FourMomentum::from_spatial(q - c.a * omega);

    double e_pre = c.p.p0 + c.q.p0;
    double e_post = c.p_post.p0 + c.q_post.p0;
    if (std::abs(e_post - e_pre) > 1e-8 * e_pre)
        throw std::runtime_error("post_collision_rel: energy conservation violated");

    Vec3 diff = c.p.p - c.q.p;
    if (norm2(diff) + (c.p.p0 - c.q.p0) * (c.p.p0 - c.q.p0) > 1e-14)
        c.theta = scattering_angle(c.p, c.q, c.p_post, c.q_post);
    c.alpha = (c.p.p0 * c.q.p0) / (c.p_post.p0 * c.q_post.p0);
    return c;
}

double kernel_k(Vec3 p, Vec3 q, Vec3 omega, const KernelSpec& spec) {
    require_unit(omega);
    if (!spec.relativistic())
        throw std::invalid_argument("kernel_k: classical spec passed to relativistic kernel");
    double p0 = energy(p), q0 = energy(q);
    double e = p0 + q0;
    double d1 = dot(omega, q / q0 - p / p0);
    if (d1 == 0.0) return 0.0;

    double s = e * e - norm2(p + q);
    double sigma;
    if (spec.family == KernelFamily::RelativisticConstantSigma) {
        sigma = spec.sigma0;
    } else {
        InvariantPair sg = invariants_sg(p, q);
        if (sg.g < 1e-14) return 0.0; // degenerate p = q
        RelativisticCollision c = post_collision_rel(p, q, omega);
        sigma = std::sqrt(1.0 + sg.g * sg.g) / sg.g * spec.maxwellian_f(c.theta);
    }
    double we = dot(omega, p + q);
    double den = e * e - we * we;
    return spec.fault_scale * s * sigma * e * e * std::abs(d1) / (den * den);
}

double excentricity(Vec3 p, Vec3 q, Vec3 omega) {
    return post_collision_rel(p, q, omega).alpha;
}

std::vector<std::pair<Vec3, Vec3>> ellipsoid_points(Vec3 p, Vec3 q, int m) {
    SphereQuadrature sq = make_sphere_quadrature(m);
    std::vector<std::pair<Vec3, Vec3>> out;
    out.reserve(sq.nodes.size());
    for (Vec3 w : sq.nodes) {
        RelativisticCollision c = post_collision_rel(p, q, w);
        out.emplace_back(c.p_post.p, c.q_post.p);
    }
    return out;
}

FourMomentum boost_z(FourMomentum x, double chi) {
    double ch = std::cosh(chi), sh = std::sinh(chi);
    Vec3 sp{x.p.x, x.p.y, x.p.z * ch + x.p0 * sh};
    // re-derive the energy so the on-shell invariant stays exact
    return FourMomentum::from_spatial(sp);
}

} // namespace boltzgain
