#pragma once
#include <utility>
#include <vector>
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// Elastic binary collision map v' = v - n (n.(v-w)), w' = w + n (n.(v-w)).
// Momentum and kinetic energy are conserved; applying the map twice with the
// same n returns the inputs (involution).
std::pair<Vec3, Vec3> post_collision(Vec3 v, Vec3 w, Vec3 n);

// Hard sphere kernel max(0, n.(v-w)). The S2+ hemisphere convention is
// n.(v-w) >= 0; the kernel vanishes identically on the other hemisphere.
double hard_sphere_B(Vec3 v, Vec3 w, Vec3 n);

// Membership in the admissible set M: |w| <= R, n.(v-w) >= 0, and both
// post-collisional velocities inside the closed ball of radius R.
bool in_admissible_set(Vec3 v, Vec3 w, Vec3 n, double R);

// Post-collision pairs swept over the nodes of a product sphere quadrature of
// order m. Every pair lies antipodally on the sphere with center (v+w)/2 and
// radius |v-w|/2.
std::vector<std::pair<Vec3, Vec3>> collision_sphere_points(Vec3 v, Vec3 w, int m);

} // namespace boltzgain
