#include "boltzgain/homogeneous_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace boltzgain {

double comparison_solution(const ComparisonState& cs, double t) {
    if (!(t >= 0.0) || t >= cs.blowup_time())
        throw std::domain_error("comparison_solution: t outside [0, blowup_time)");
    return cs.rho0 / (1.0 - cs.delta * cs.rho0 * t);
}

double Trajectory::worst_form_gap() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double h = max_on_ball[i];
        if (h <= 0.0) continue;
        worst = std::max(worst, (max_on_ball[i] - min_on_ball[i]) / h);
    }
    return worst;
}

namespace {

using State = std::vector<double>;

struct System {
    std::function<void(const State&, State&)> rhs;
    State y;
    double threshold = std::numeric_limits<double>::infinity();
    ComparisonState cs;
    Trajectory traj;
    BlowupReport report;
    // scratch
    State k1, k2, k3, k4, tmp, big, half;
};

double sup_of(const State& y) {
    double m = 0.0;
    for (double v : y) m = std::max(m, v);
    return m;
}

void rk4(System& s, const State& y0, double dt, State& out) {
    const std::size_t n = y0.size();
    s.k1.resize(n); s.k2.resize(n); s.k3.resize(n); s.k4.resize(n); s.tmp.resize(n);
    s.rhs(y0, s.k1);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = y0[i] + 0.5 * dt * s.k1[i];
    s.rhs(s.tmp, s.k2);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = y0[i] + 0.5 * dt * s.k2[i];
    s.rhs(s.tmp, s.k3);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = y0[i] + dt * s.k3[i];
    s.rhs(s.tmp, s.k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y0[i] + dt / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

void record(System& s, const std::shared_ptr<const VelocityGrid>& grid, double R, double t,
            bool store_fields) {
    const auto& y = s.y;
    double sup = sup_of(y);
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    const double r2 = R * R;
    for (std::size_t i = 0; i < grid->node_count(); ++i) {
        if (norm2(grid->node_center[i]) <= r2) {
            mn = std::min(mn, y[i]);
            mx = std::max(mx, y[i]);
        }
    }
    if (!std::isfinite(mn)) { mn = 0.0; mx = 0.0; }
    s.traj.times.push_back(t);
    s.traj.sup_norm.push_back(sup);
    s.traj.min_on_ball.push_back(mn);
    s.traj.max_on_ball.push_back(mx);
    double pole = s.cs.blowup_time();
    s.traj.comparison.push_back(t < pole ? s.cs.rho0 / (1.0 - s.cs.delta * s.cs.rho0 * t)
                                         : std::numeric_limits<double>::infinity());
    if (store_fields) s.traj.fields.push_back(y);
}

// lock-step integration of one or two systems with shared step decisions
void integrate(std::vector<System*> systems, const std::shared_ptr<const VelocityGrid>& grid,
               double R, double t_end, const IntegrationControls& c) {
    double delta_rho0_max = 0.0;
    for (System* s : systems)
        delta_rho0_max = std::max(delta_rho0_max, s->cs.delta * s->cs.rho0);
    double dt = c.dt_init > 0.0 ? c.dt_init
                                : (delta_rho0_max > 0.0 ? 0.01 / delta_rho0_max : t_end / 100.0);
    double t = 0.0;
    long steps = 0;

    for (System* s : systems) record(*s, grid, R, t, c.store_fields);

    auto detected = [&](System* s) { return sup_of(s->y) >= s->threshold; };
    bool any_detected = false;
    for (System* s : systems)
        if (detected(s)) {
            s->report.detected = true;
            s->report.t_detect = t;
            any_detected = true;
        }

    while (!any_detected && t < t_end) {
        double dt_try = std::min(dt, t_end - t);
        bool accepted = false;
        while (!accepted) {
            bool reject = false;
            for (System* s : systems) {
                rk4(*s, s->y, dt_try, s->big);
                double sup0 = sup_of(s->y), sup1 = sup_of(s->big);
                if (sup0 > 0.0 && (sup1 - sup0) > c.increment_cap * sup0) { reject = true; break; }
            }
            if (!reject && c.local_err_tol > 0.0) {
                for (System* s : systems) {
                    rk4(*s, s->y, 0.5 * dt_try, s->tmp);
                    State mid = s->tmp; // rk4 reuses tmp internally
                    rk4(*s, mid, 0.5 * dt_try, s->half);
                    double scale = std::max({sup_of(s->big), sup_of(s->half), 1e-300});
                    double err = 0.0;
                    for (std::size_t i = 0; i < s->half.size(); ++i)
                        err = std::max(err, std::abs(s->half[i] - s->big[i]));
                    if (err > c.local_err_tol * scale) { reject = true; break; }
                }
            }
            if (reject) {
                dt_try *= 0.5;
                if (dt_try < c.dt_min)
                    throw InconclusiveRunError(
                        "time step underflow before threshold crossing or horizon");
                continue;
            }
            for (System* s : systems) s->y = (c.local_err_tol > 0.0) ? s->half : s->big;
            accepted = true;
        }
        t += dt_try;
        ++steps;
        dt = dt_try * c.dt_growth;
        for (System* s : systems) record(*s, grid, R, t, c.store_fields);
        for (System* s : systems) {
            if (!s->report.detected && detected(s)) {
                s->report.detected = true;
                s->report.t_detect = t;
                any_detected = true;
            }
        }
        for (System* s : systems) {
            s->report.steps = steps;
            s->report.dt_final = dt_try;
            s->report.final_sup_norm = sup_of(s->y);
        }
    }
}

std::vector<std::size_t> ball_nodes(const VelocityGrid& g, double R) {
    std::vector<std::size_t> idx;
    const double r2 = R * R;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (norm2(g.node_center[i]) <= r2) idx.push_back(i);
    return idx;
}

double unit_mask_delta(CachedGainField& cache, const std::shared_ptr<const VelocityGrid>& grid,
                       double R, const std::vector<std::size_t>& ball) {
    DistributionField unit = DistributionField::ball_mask(grid, R, 1.0);
    const auto& gains = cache.evaluate(unit);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i : ball) m = std::min(m, gains[i]);
    return std::isfinite(m) ? m : 0.0;
}

} // namespace

EvolveResult evolve_truncated(double rho0, double R, const KernelSpec& kernel,
                              std::shared_ptr<const VelocityGrid> grid,
                              const SphereQuadrature& sq, double t_end,
                              const IntegrationControls& controls) {
    if (!(rho0 >= 0.0)) throw std::invalid_argument("evolve_truncated: rho0 must be >= 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("evolve_truncated: t_end must be > 0");
    if (R > grid->radius + 1e-15)
        throw std::invalid_argument("evolve_truncated: grid must cover the ball B_R");

    CachedGainField cache(grid, kernel, sq, controls.threads);
    auto ball = ball_nodes(*grid, R);
    double delta = unit_mask_delta(cache, grid, R, ball);

    System sys;
    sys.cs = ComparisonState{rho0, delta};
    sys.threshold = rho0 > 0.0 ? controls.threshold_factor * rho0
                               : std::numeric_limits<double>::infinity();
    sys.traj.grid = grid;
    sys.traj.ball_radius = R;
    sys.traj.comparison_state = sys.cs;
    sys.y.assign(grid->node_count(), 0.0);
    for (std::size_t i : ball) sys.y[i] = rho0;
    sys.report.threshold = sys.threshold;

    DistributionField scratch(grid);
    sys.rhs = [&](const State& y, State& dy) {
        for (std::size_t i = 0; i < grid->node_count(); ++i) scratch.set_node(i, y[i]);
        const auto& gains = cache.evaluate(scratch);
        double cstar = std::numeric_limits<double>::infinity();
        for (std::size_t i : ball) cstar = std::min(cstar, gains[i]);
        if (!std::isfinite(cstar)) cstar = 0.0;
        dy.assign(y.size(), 0.0);
        for (std::size_t i : ball) dy[i] = cstar;
    };

    integrate({&sys}, grid, R, t_end, controls);
    return {std::move(sys.traj), sys.report};
}

EvolveResult evolve_full_homogeneous(const DistributionField& f0, double rho0, double R,
                                     const KernelSpec& kernel, const SphereQuadrature& sq,
                                     double t_end, const IntegrationControls& controls) {
    f0.validate();
    auto grid = f0.grid_ptr();
    auto ball = ball_nodes(*grid, R);
    for (std::size_t i : ball)
        if (f0.node_value(i) < rho0)
            throw std::invalid_argument("evolve_full_homogeneous: f0 must dominate rho0 chi_B_R");

    CachedGainField cache(grid, kernel, sq, controls.threads);
    double delta = unit_mask_delta(cache, grid, R, ball);

    System sys;
    sys.cs = ComparisonState{rho0, delta};
    sys.threshold = rho0 > 0.0 ? controls.threshold_factor * rho0
                               : std::numeric_limits<double>::infinity();
    sys.traj.grid = grid;
    sys.traj.ball_radius = R;
    sys.traj.comparison_state = sys.cs;
    sys.y.resize(grid->node_count());
    for (std::size_t i = 0; i < grid->node_count(); ++i) sys.y[i] = f0.node_value(i);
    sys.report.threshold = sys.threshold;

    DistributionField scratch(grid);
    sys.rhs = [&](const State& y, State& dy) {
        for (std::size_t i = 0; i < grid->node_count(); ++i) scratch.set_node(i, y[i]);
        dy = cache.evaluate(scratch);
    };

    integrate({&sys}, grid, R, t_end, controls);
    return {std::move(sys.traj), sys.report};
}

CoEvolveResult co_evolve(const DistributionField& f0, double rho0, double R,
                         const KernelSpec& kernel, const SphereQuadrature& sq, double t_end,
                         const IntegrationControls& controls) {
    f0.validate();
    auto grid = f0.grid_ptr();
    auto ball = ball_nodes(*grid, R);
    for (std::size_t i : ball)
        if (f0.node_value(i) < rho0)
            throw std::invalid_argument("co_evolve: f0 must dominate rho0 chi_B_R");

    CachedGainField cache_full(grid, kernel, sq, controls.threads);
    CachedGainField cache_trunc(grid, kernel, sq, controls.threads);
    double delta = unit_mask_delta(cache_trunc, grid, R, ball);

    System full, trunc;
    for (System* s : {&full, &trunc}) {
        s->cs = ComparisonState{rho0, delta};
        s->threshold = rho0 > 0.0 ? controls.threshold_factor * rho0
                                  : std::numeric_limits<double>::infinity();
        s->traj.grid = grid;
        s->traj.ball_radius = R;
        s->traj.comparison_state = s->cs;
        s->report.threshold = s->threshold;
    }
    full.y.resize(grid->node_count());
    for (std::size_t i = 0; i < grid->node_count(); ++i) full.y[i] = f0.node_value(i);
    trunc.y.assign(grid->node_count(), 0.0);
    for (std::size_t i : ball) trunc.y[i] = rho0;

    DistributionField scratch_f(grid), scratch_t(grid);
    full.rhs = [&](const State& y, State& dy) {
        for (std::size_t i = 0; i < grid->node_count(); ++i) scratch_f.set_node(i, y[i]);
        dy = cache_full.evaluate(scratch_f);
    };
    trunc.rhs = [&](const State& y, State& dy) {
        for (std::size_t i = 0; i < grid->node_count(); ++i) scratch_t.set_node(i, y[i]);
        const auto& gains = cache_trunc.evaluate(scratch_t);
        double cstar = std::numeric_limits<double>::infinity();
        for (std::size_t i : ball) cstar = std::min(cstar, gains[i]);
        if (!std::isfinite(cstar)) cstar = 0.0;
        dy.assign(y.size(), 0.0);
        for (std::size_t i : ball) dy[i] = cstar;
    };

    integrate({&full, &trunc}, grid, R, t_end, controls);
    return {{std::move(full.traj), full.report}, {std::move(trunc.traj), trunc.report}};
}

CoEvolveResult co_evolve_full_pair(const DistributionField& f0_upper,
                                   const DistributionField& f0_lower, double rho0, double R,
                                   const KernelSpec& kernel, const SphereQuadrature& sq,
                                   double t_end, const IntegrationControls& controls) {
    f0_upper.validate();
    f0_lower.validate();
    auto grid = f0_upper.grid_ptr();
    if (grid != f0_lower.grid_ptr())
        throw std::invalid_argument("co_evolve_full_pair: fields must share a grid");
    auto ball = ball_nodes(*grid, R);

    CachedGainField cache_a(grid, kernel, sq, controls.threads);
    CachedGainField cache_b(grid, kernel, sq, controls.threads);
    CachedGainField cache_d(grid, kernel, sq, controls.threads);
    double delta = unit_mask_delta(cache_d, grid, R, ball);

    System a, b;
    for (System* s : {&a, &b}) {
        s->cs = ComparisonState{rho0, delta};
        s->threshold = rho0 > 0.0 ? controls.threshold_factor * rho0
                                  : std::numeric_limits<double>::infinity();
        s->traj.grid = grid;
        s->traj.ball_radius = R;
        s->traj.comparison_state = s->cs;
        s->report.threshold = s->threshold;
    }
    a.y.resize(grid->node_count());
    b.y.resize(grid->node_count());
    for (std::size_t i = 0; i < grid->node_count(); ++i) {
        a.y[i] = f0_upper.node_value(i);
        b.y[i] = f0_lower.node_value(i);
    }
    DistributionField sa(grid), sb(grid);
    a.rhs = [&](const State& y, State& dy) {
        for (std::size_t i = 0; i < grid->node_count(); ++i) sa.set_node(i, y[i]);
        dy = cache_a.evaluate(sa);
    };
    b.rhs = [&](const State& y, State& dy) {
        for (std::size_t i = 0; i < grid->node_count(); ++i) sb.set_node(i, y[i]);
        dy = cache_b.evaluate(sb);
    };

    integrate({&a, &b}, grid, R, t_end, controls);
    return {{std::move(a.traj), a.report}, {std::move(b.traj), b.report}};
}

bool check_domination(const Trajectory& full, const Trajectory& truncated) {
    if (full.grid != truncated.grid)
        throw std::invalid_argument("check_domination: trajectories must share a grid");
    if (full.times.size() != truncated.times.size())
        throw std::invalid_argument("check_domination: trajectories must share time stamps");
    for (std::size_t k = 0; k < full.times.size(); ++k)
        if (full.times[k] != truncated.times[k])
            throw std::invalid_argument("check_domination: trajectories must share time stamps");
    if (full.fields.size() != full.times.size() || truncated.fields.size() != truncated.times.size())
        throw std::invalid_argument("check_domination: trajectories must store fields");

    for (std::size_t k = 0; k < full.times.size(); ++k) {
        double tol = 1e-9 * (1.0 + truncated.sup_norm[k]);
        const auto& f = full.fields[k];
        const auto& g = truncated.fields[k];
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] < g[i] - tol) return false;
    }
    return true;
}

} // namespace boltzgain
