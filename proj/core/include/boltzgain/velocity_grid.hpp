#pragma once
#include <cstdint>
#include <memory>
#include <vector>
#include "boltzgain/vec3.hpp"

namespace boltzgain {

// Cell-centered Cartesian grid on [-R,R]^3 clipped to the closed ball |v| <= R.
// Node spacing h = 2R/n, every node carries the midpoint weight h^3.
struct VelocityGrid {
    double radius = 0.0;
    int n = 0;
    double h = 0.0;
    std::vector<std::int32_t> node_cell;   // node index -> dense cell index
    std::vector<Vec3> node_center;         // node index -> cell center
    std::vector<std::int32_t> cell_node;   // dense cell index -> node index or -1

    // D4h orbit tables (signed permutations of the (x,y) pair plus z sign flip):
    // rep_of[i] is the node index of the canonical orbit representative of node i.
    std::vector<std::int32_t> rep_of;
    std::vector<std::int32_t> reps;

    std::size_t node_count() const { return node_center.size(); }
    double weight() const { return h * h * h; }
    double coord(int i) const { return -radius + (i + 0.5) * h; }
    std::int32_t cell_index(int ix, int iy, int iz) const {
        return (std::int32_t(ix) * n + iy) * n + iz;
    }
};

std::shared_ptr<const VelocityGrid> make_velocity_grid(double R, int n);

// Scalar field sampled on the grid nodes. Values are kept in a dense n^3 buffer
// (zero on cells outside the ball) so that trilinear interpolation can gather
// corners directly.
class DistributionField {
public:
    DistributionField() = default;
    explicit DistributionField(std::shared_ptr<const VelocityGrid> grid);
    static DistributionField ball_mask(std::shared_ptr<const VelocityGrid> grid,
                                       double mask_radius, double height = 1.0);
    template <typename Fn>
    static DistributionField from_function(std::shared_ptr<const VelocityGrid> grid, Fn&& f) {
        DistributionField out(std::move(grid));
        for (std::size_t i = 0; i < out.grid_->node_count(); ++i)
            out.set_node(i, f(out.grid_->node_center[i]));
        return out;
    }

    const VelocityGrid& grid() const { return *grid_; }
    const std::shared_ptr<const VelocityGrid>& grid_ptr() const { return grid_; }
    const std::vector<double>& dense() const { return dense_; }

    double node_value(std::size_t i) const { return dense_[grid_->node_cell[i]]; }
    void set_node(std::size_t i, double v) { dense_[grid_->node_cell[i]] = v; }

    double max_value() const;
    double min_on_ball(double r) const; // min over nodes with |center| <= r

    // trilinear interpolation with zero extension outside the grid ball
    double interpolate(Vec3 p) const;

    void validate() const; // finite and nonnegative node values

private:
    std::shared_ptr<const VelocityGrid> grid_;
    std::vector<double> dense_;
};

} // namespace boltzgain
