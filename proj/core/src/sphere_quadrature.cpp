#include "boltzgain/sphere_quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace boltzgain {

void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(k, 0.0);
    weights.assign(k, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (k + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (k + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence up to P_k and derivative
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= k; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = k * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if (k == 1) {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
}

SphereQuadrature make_sphere_quadrature(int m) {
    if (m < 2) throw std::invalid_argument("make_sphere_quadrature: m must be >= 2");
    const double pi = 3.14159265358979323846;

    std::vector<double> ct, wt;
    if (m % 2 == 0) {
        // composite: m/2 Gauss-Legendre nodes per hemisphere in cos(theta)
        std::vector<double> xs, ws;
        gauss_legendre(m / 2, xs, ws);
        ct.reserve(m);
        wt.reserve(m);
        for (int i = 0; i < m / 2; ++i) { // [-1, 0]
            ct.push_back(0.5 * (xs[i] - 1.0));
            wt.push_back(0.5 * ws[i]);
        }
        for (int i = 0; i < m / 2; ++i) { // [0, 1]
            ct.push_back(0.5 * (xs[i] + 1.0));
            wt.push_back(0.5 * ws[i]);
        }
    } else {
        gauss_legendre(m, ct, wt);
    }

    SphereQuadrature sq;
    sq.m = m;
    sq.nodes.reserve(std::size_t(m) * m);
    sq.weights.reserve(std::size_t(m) * m);
    const double wphi = 2.0 * pi / m;
    for (int i = 0; i < m; ++i) {
        double st = std::sqrt(std::max(0.0, 1.0 - ct[i] * ct[i]));
        for (int j = 0; j < m; ++j) {
            double phi = 2.0 * pi * (j + 0.5) / m;
            sq.nodes.push_back({st * std::cos(phi), st * std::sin(phi), ct[i]});
            sq.weights.push_back(wt[i] * wphi);
        }
    }
    sq.d4h_invariant = (m % 4 == 0);
    return sq;
}

} // namespace boltzgain
