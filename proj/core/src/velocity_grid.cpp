#include "boltzgain/velocity_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boltzgain {

namespace {

// centered lattice index of a coordinate slot: coordinate = (j + 0.5) * h
// with j = i - n/2; sign flip is the index involution j -> -1-j.
inline int fold(int j) { return j >= 0 ? j : -1 - j; }

} // namespace

std::shared_ptr<const VelocityGrid> make_velocity_grid(double R, int n) {
    if (!(R > 0.0)) throw std::invalid_argument("make_velocity_grid: R must be > 0");
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("make_velocity_grid: n must be even and >= 4");

    auto g = std::make_shared<VelocityGrid>();
    g->radius = R;
    g->n = n;
    g->h = 2.0 * R / n;
    g->cell_node.assign(std::size_t(n) * n * n, -1);

    const double R2 = R * R;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            for (int iz = 0; iz < n; ++iz) {
                Vec3 c{g->coord(ix), g->coord(iy), g->coord(iz)};
                if (norm2(c) <= R2) {
                    std::int32_t cell = g->cell_index(ix, iy, iz);
                    g->cell_node[cell] = std::int32_t(g->node_center.size());
                    g->node_cell.push_back(cell);
                    g->node_center.push_back(c);
                }
            }
        }
    }

    // D4h orbit tables on centered indices
    VelocityGrid* gm = g.get();
    gm->rep_of.assign(g->node_count(), -1);
    const int half = n / 2;
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        std::int32_t cell = g->node_cell[i];
        int iz = cell % n, iy = (cell / n) % n, ix = cell / (n * n);
        int ax = fold(ix - half), ay = fold(iy - half), az = fold(iz - half);
        if (ax < ay) std::swap(ax, ay);
        std::int32_t rep_cell = g->cell_index(ax + half, ay + half, az + half);
        gm->rep_of[i] = g->cell_node[rep_cell];
        if (gm->rep_of[i] == std::int32_t(i)) gm->reps.push_back(std::int32_t(i));
    }
    return g;
}

DistributionField::DistributionField(std::shared_ptr<const VelocityGrid> grid)
    : grid_(std::move(grid)), dense_(grid_->cell_node.size(), 0.0) {}

DistributionField DistributionField::ball_mask(std::shared_ptr<const VelocityGrid> grid,
                                               double mask_radius, double height) {
    DistributionField f(std::move(grid));
    const double r2 = mask_radius * mask_radius;
    for (std::size_t i = 0; i < f.grid_->node_count(); ++i)
        if (norm2(f.grid_->node_center[i]) <= r2) f.set_node(i, height);
    return f;
}

double DistributionField::max_value() const {
    double m = 0.0;
    for (std::size_t i = 0; i < grid_->node_count(); ++i) m = std::max(m, node_value(i));
    return m;
}

double DistributionField::min_on_ball(double r) const {
    double m = std::numeric_limits<double>::infinity();
    const double r2 = r * r;
    for (std::size_t i = 0; i < grid_->node_count(); ++i)
        if (norm2(grid_->node_center[i]) <= r2) m = std::min(m, node_value(i));
    return m;
}

double DistributionField::interpolate(Vec3 p) const {
    const VelocityGrid& g = *grid_;
    const int n = g.n;
    const double inv_h = 1.0 / g.h;

    double tx = (p.x + g.radius) * inv_h - 0.5;
    double ty = (p.y + g.radius) * inv_h - 0.5;
    double tz = (p.z + g.radius) * inv_h - 0.5;
    int ix = int(std::floor(tx)), iy = int(std::floor(ty)), iz = int(std::floor(tz));
    double fx = tx - ix, fy = ty - iy, fz = tz - iz;

    if (ix < -1 || ix >= n || iy < -1 || iy >= n || iz < -1 || iz >= n) return 0.0;

    auto plane = [&](int cx) -> double {
        if (cx < 0 || cx >= n) return 0.0;
        auto line = [&](int cy) -> double {
            if (cy < 0 || cy >= n) return 0.0;
            const double* row = dense_.data() + (std::size_t(cx) * n + cy) * n;
            double v0 = (iz >= 0) ? row[iz] : 0.0;
            double v1 = (iz + 1 < n) ? row[iz + 1] : 0.0;
            return v0 + fz * (v1 - v0);
        };
        double a = line(iy), b = line(iy + 1);
        return a + fy * (b - a);
    };
    double a = plane(ix), b = plane(ix + 1);
    return a + fx * (b - a);
}

void DistributionField::validate() const {
    for (std::size_t i = 0; i < grid_->node_count(); ++i) {
        double v = node_value(i);
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("DistributionField: values must be finite and nonnegative");
    }
}

} // namespace boltzgain
