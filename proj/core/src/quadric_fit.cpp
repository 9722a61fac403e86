#include "boltzgain/quadric_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boltzgain {

std::array<double, 3> sym3_eigenvalues(const std::array<std::array<double, 3>, 3>& m) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15 * (std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + 1e-300))
            break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                double app = a[p][p], aqq = a[q][q], apq = a[p][q];
                a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p][q] = a[q][p] = 0.0;
                int r = 3 - p - q;
                double arp = a[r][p], arq = a[r][q];
                a[r][p] = a[p][r] = c * arp - s * arq;
                a[r][q] = a[q][r] = s * arp + c * arq;
            }
        }
    }
    std::array<double, 3> ev{a[0][0], a[1][1], a[2][2]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

namespace {

// Gaussian elimination with partial pivoting for the 9x9 normal equations
bool solve_dense(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (std::abs(A[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        double d = A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = A[r * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r * n + c] * b[c];
        b[r] = s / A[r * n + r];
    }
    return true;
}

} // namespace

QuadricFit fit_centered_quadric(const std::vector<Vec3>& points) {
    if (points.size() < 9)
        throw std::invalid_argument("fit_centered_quadric: need at least 9 points");

    Vec3 centroid{};
    for (Vec3 p : points) centroid += p;
    centroid = centroid / double(points.size());

    double spread2 = 0.0;
    for (Vec3 p : points) spread2 = std::max(spread2, norm2(p - centroid));

    QuadricFit out;
    if (spread2 < 1e-20) {
        out.degenerate = true;
        return out;
    }

    // normalize coordinates to unit scale for conditioning
    double scale = std::sqrt(spread2);
    std::vector<double> A(9 * 9, 0.0), rhs(9, 0.0);
    auto monomials = [&](Vec3 p, double* m) {
        Vec3 c = (p - centroid) / scale;
        m[0] = c.x * c.x;
        m[1] = c.y * c.y;
        m[2] = c.z * c.z;
        m[3] = 2.0 * c.x * c.y;
        m[4] = 2.0 * c.x * c.z;
        m[5] = 2.0 * c.y * c.z;
        m[6] = c.x;
        m[7] = c.y;
        m[8] = c.z;
    };
    double m[9];
    for (Vec3 p : points) {
        monomials(p, m);
        for (int i = 0; i < 9; ++i) {
            rhs[i] += m[i];
            for (int j = 0; j < 9; ++j) A[i * 9 + j] += m[i] * m[j];
        }
    }
    if (!solve_dense(A, rhs, 9)) {
        out.degenerate = true;
        return out;
    }

    double ss = 0.0;
    for (Vec3 p : points) {
        monomials(p, m);
        double r = -1.0;
        for (int i = 0; i < 9; ++i) r += rhs[i] * m[i];
        ss += r * r;
    }
    out.residual = std::sqrt(ss / double(points.size()));

    std::array<std::array<double, 3>, 3> q{{{rhs[0], rhs[3], rhs[4]},
                                            {rhs[3], rhs[1], rhs[5]},
                                            {rhs[4], rhs[5], rhs[2]}}};
    out.eigenvalues = sym3_eigenvalues(q);
    return out;
}

} // namespace boltzgain
