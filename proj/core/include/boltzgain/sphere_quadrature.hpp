#pragma once
#include <vector>
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration.
void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights);

// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) times a
// uniform offset azimuth grid, m*m nodes total. For even m the polar rule is a
// two-panel composite split at the equator, which places the kink of hemisphere
// masks on a panel boundary. For m divisible by 4 the node set is invariant
// under the 16-element symmetry subgroup that fixes the z axis up to sign.
struct SphereQuadrature {
    int m = 0;
    std::vector<Vec3> nodes;     // unit vectors
    std::vector<double> weights; // positive, sum to 4*pi
    bool d4h_invariant = false;  // z-axis signed-permutation subgroup symmetry
};

SphereQuadrature make_sphere_quadrature(int m);

} // namespace boltzgain
