#pragma once
#include <array>
#include <vector>
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// Least-squares fit of the 9-parameter centered quadric
//   x^T A x + b^T x = 1
// through a point cloud (points are centered on their centroid first).
// The cloud lies on an ellipsoid iff all three eigenvalues of A are positive.
struct QuadricFit {
    bool degenerate = false;        // cloud collapsed to (nearly) a point
    std::array<double, 3> eigenvalues{};
    double residual = 0.0;          // rms of (x^T A x + b^T x - 1)
};

QuadricFit fit_centered_quadric(const std::vector<Vec3>& points);

// eigenvalues of a symmetric 3x3 matrix (ascending), cyclic Jacobi sweeps
std::array<double, 3> sym3_eigenvalues(const std::array<std::array<double, 3>, 3>& m);

} // namespace boltzgain
