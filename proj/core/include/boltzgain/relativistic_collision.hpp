#pragma once
#include <utility>
#include <vector>
#include "boltzgain/kernel_spec.hpp"
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// particle energy sqrt(1 + |p|^2), units m = c = 1
double energy(Vec3 p);

// On-shell four momentum with signature (+ - - -); p0 is derived from the
// spatial part at construction and never stored inconsistently.
struct FourMomentum {
    Vec3 p;
    double p0 = 1.0;
    static FourMomentum from_spatial(Vec3 p) { return {p, energy(p)}; }
};

// s = squared total center-of-mass energy, g = relative momentum.
// For two unit masses s = 4 (1 + g^2).
struct InvariantPair {
    double s = 4.0;
    double g = 0.0;
};

InvariantPair invariants_sg(Vec3 p, Vec3 q);

// Scattering-angle cosine exactly as printed: 1 - 2 <p-q, p'-q'>_M / <p-q, p-q>_M.
// Numerically this equals 1 - 2 cos(theta_cm), so the forward limit p'=p, q'=q
// evaluates to -1 (theta = pi) and the exchange collision p'=q, q'=p evaluates
// to +3 before clamping. Both in-scope kernels are insensitive to this
// reparametrization of the angle.
double scattering_cos_raw(FourMomentum p, FourMomentum q, FourMomentum p_post, FourMomentum q_post);

// arccos of the clamped raw cosine, in [0, pi]; throws on degenerate p = q
double scattering_angle(FourMomentum p, FourMomentum q, FourMomentum p_post, FourMomentum q_post);

// B(g,theta) = g sqrt(s) sigma(g,theta) / 2 with s = 4(1+g^2).
// Maxwellian molecules use the cancelled closed form sqrt(s)/2 * sqrt(1+g^2) * F(theta),
// finite at g = 0.
double kernel_B(double g, double theta, const KernelSpec& spec);

// offset a(p,q,omega) = 2 e p0 q0 (omega.(q^ - p^)) / (e^2 - (omega.(p+q))^2),
// e = p0 + q0, x^ = x / x0
double offset_a(Vec3 p, Vec3 q, Vec3 omega);

struct RelativisticCollision {
    FourMomentum p, q;
    Vec3 omega;
    double a = 0.0;
    FourMomentum p_post, q_post;
    double theta = 0.0;  // printed-formula angle; pi for the identity collision
    double alpha = 1.0;  // excentricity value for this omega
};

// p' = p + a omega, q' = q - a omega. Energy conservation of the printed offset
// formula is certified numerically (throws if violated beyond 1e-8).
RelativisticCollision post_collision_rel(Vec3 p, Vec3 q, Vec3 omega);

// Glassey-Strauss style kernel in the omega parametrization:
//   k(p,q,omega) = s sigma(g,theta) e^2 |omega.(q^ - p^)| / (e^2 - (omega.(p+q))^2)^2.
// The denominator parenthesization follows the dimensionally consistent reading,
// and the constant in front is the one that makes the omega-form integral agree
// with the center-of-mass form; see mc_form_equivalence for the numerical
// adjudication of both choices.
double kernel_k(Vec3 p, Vec3 q, Vec3 omega, const KernelSpec& spec);

// alpha = p0 q0 / (p0' q0'), evaluated per omega
double excentricity(Vec3 p, Vec3 q, Vec3 omega);

// post-collision momentum pairs swept over a product sphere quadrature
std::vector<std::pair<Vec3, Vec3>> ellipsoid_points(Vec3 p, Vec3 q, int m);

// Lorentz boost along z with rapidity chi (test utility for covariance checks)
FourMomentum boost_z(FourMomentum x, double chi);

} // namespace boltzgain
