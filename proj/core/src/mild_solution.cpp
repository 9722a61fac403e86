#include "boltzgain/mild_solution.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "boltzgain/gain_operator.hpp"
#include "boltzgain/parallel.hpp"
#include "boltzgain/rng.hpp"

namespace boltzgain {

void InhomogeneousConfig::validate() const {
    if (!(c0 > 0.0) || !(c1 > 0.0) || !(c2 > 0.0) || !(T > 0.0))
        throw std::invalid_argument("InhomogeneousConfig: c0, c1, c2, T must be positive");
    if (!(c1 > T * c2))
        throw std::invalid_argument("InhomogeneousConfig: requires c1 > T * c2");
    if (k_max < 1) throw std::invalid_argument("InhomogeneousConfig: k_max must be >= 1");
    if (n_t < 1) throw std::invalid_argument("InhomogeneousConfig: n_t must be >= 1");
}

double eval_phi(Vec3 x, Vec3 v, const InhomogeneousConfig& cfg) {
    return (norm2(x) <= cfg.c1 * cfg.c1 && norm2(v) <= cfg.c2 * cfg.c2) ? cfg.c0 : 0.0;
}

namespace {

struct FieldKey {
    int k = 0;
    double t = 0.0;
    Vec3 x{};
    bool operator==(const FieldKey& o) const {
        return k == o.k && t == o.t && x.x == o.x.x && x.y == o.x.y && x.z == o.x.z;
    }
};

struct FieldKeyHash {
    std::size_t operator()(const FieldKey& key) const {
        auto mix = [](std::uint64_t h, std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        };
        std::uint64_t h = std::uint64_t(key.k);
        std::uint64_t bits;
        auto d = [&](double x) {
            std::memcpy(&bits, &x, 8);
            return bits;
        };
        h = mix(h, d(key.t));
        h = mix(h, d(key.x.x));
        h = mix(h, d(key.x.y));
        h = mix(h, d(key.x.z));
        return std::size_t(h);
    }
};

} // namespace

struct PicardEvaluator::Impl {
    InhomogeneousConfig cfg;
    std::shared_ptr<const VelocityGrid> grid;
    SphereQuadrature sq;
    std::vector<double> gl_nodes, gl_weights; // canonical on [-1,1]

    std::unordered_map<FieldKey, std::shared_ptr<const DistributionField>, FieldKeyHash> memo;
    mutable std::shared_mutex memo_mutex;

    explicit Impl(InhomogeneousConfig c) : cfg(std::move(c)) {
        cfg.validate();
        grid = make_velocity_grid(cfg.c2, cfg.w_grid_n);
        sq = make_sphere_quadrature(cfg.sphere_m);
        gauss_legendre(cfg.n_t, gl_nodes, gl_weights);
    }

    // composite ladder: n_t Gauss-Legendre nodes per unit-time panel, the last
    // (or only) panel rescaled to its actual width
    void time_ladder(double t, std::vector<double>& taus, std::vector<double>& wts) const {
        taus.clear();
        wts.clear();
        double lo = 0.0;
        while (lo < t) {
            double hi = std::min(lo + 1.0, t);
            double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
            for (int i = 0; i < cfg.n_t; ++i) {
                taus.push_back(mid + hw * gl_nodes[i]);
                wts.push_back(hw * gl_weights[i]);
            }
            lo = hi;
        }
    }

    double eval(int k, double t, Vec3 x, Vec3 v) {
        if (k < 0 || k > cfg.k_max)
            throw std::out_of_range("eval_picard: iterate index outside [0, k_max]");
        if (!(t >= 0.0) || t > cfg.T)
            throw std::domain_error("eval_picard: t outside [0, T]");
        if (k == 0) return 0.0;
        if (norm2(v) > cfg.c2 * cfg.c2) return 0.0; // chi2 factor
        Vec3 foot = x - t * v;
        double fs = (norm2(foot) <= cfg.c1 * cfg.c1) ? cfg.c0 : 0.0;
        if (k == 1 || t == 0.0) return fs;

        std::vector<double> taus, wts;
        time_ladder(t, taus, wts);
        double acc = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            Vec3 xs = x - (t - taus[i]) * v;
            std::shared_ptr<const DistributionField> G = field(k - 1, taus[i], xs);
            acc += wts[i] * gain_apply(*G, cfg.kernel, sq, v);
        }
        return fs + acc;
    }

    std::shared_ptr<const DistributionField> field(int k, double t, Vec3 x) {
        if (k == 1) { // closed form, rebuilt on the fly
            auto f = std::make_shared<DistributionField>(grid);
            for (std::size_t i = 0; i < grid->node_count(); ++i) {
                Vec3 zeta = grid->node_center[i];
                Vec3 foot = x - t * zeta;
                f->set_node(i, (norm2(foot) <= cfg.c1 * cfg.c1) ? cfg.c0 : 0.0);
            }
            return f;
        }
        FieldKey key{k, t, x};
        {
            std::shared_lock lk(memo_mutex);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        auto f = std::make_shared<DistributionField>(grid);
        for (std::size_t i = 0; i < grid->node_count(); ++i)
            f->set_node(i, eval(k, t, x, grid->node_center[i]));
        {
            std::unique_lock lk(memo_mutex);
            auto [it, inserted] = memo.emplace(key, f);
            return it->second; // first writer wins; duplicates carry identical values
        }
    }
};

PicardEvaluator::PicardEvaluator(InhomogeneousConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(cfg))) {}

PicardEvaluator::~PicardEvaluator() = default;

const InhomogeneousConfig& PicardEvaluator::config() const { return impl_->cfg; }

double PicardEvaluator::eval(int k, double t, Vec3 x, Vec3 v) {
    return impl_->eval(k, t, x, v);
}

std::size_t PicardEvaluator::memo_entries() const {
    std::shared_lock lk(impl_->memo_mutex);
    return impl_->memo.size();
}

double eval_picard(int k, double t, Vec3 x, Vec3 v, PicardEvaluator& ev) {
    return ev.eval(k, t, x, v);
}

std::vector<ShrinkingBallSample> check_shrinking_ball_detailed(PicardEvaluator& ev, int k,
                                                               double t, int samples,
                                                               std::uint64_t seed,
                                                               unsigned threads) {
    const InhomogeneousConfig& cfg = ev.config();
    cfg.validate();
    if (!(t < cfg.T)) throw std::invalid_argument("check_shrinking_ball: requires t < T");
    double radius = cfg.c1 - t * cfg.c2;

    const std::size_t count = std::size_t(samples);
    std::vector<ShrinkingBallSample> out;
    out.resize(count);
    parallel_for(count, threads, [&](std::size_t i) {
        CounterRng rx{seed, 3 * i + 0, 0}, ry{seed, 3 * i + 1, 0}, rv{seed, 3 * i + 2, 0};
        ShrinkingBallSample s;
        s.x = rx.ball(radius);
        s.y = ry.ball(radius);
        s.v = rv.ball(cfg.c2);
        s.f_x = ev.eval(k, t, s.x, s.v);
        s.f_y = ev.eval(k, t, s.y, s.v);
        s.discrepancy = std::abs(s.f_x - s.f_y);
        out[i] = s;
    });
    return out;
}

double check_shrinking_ball(PicardEvaluator& ev, int k, double t, int samples,
                            std::uint64_t seed, unsigned threads) {
    double worst = 0.0;
    for (const auto& s : check_shrinking_ball_detailed(ev, k, t, samples, seed, threads))
        worst = std::max(worst, s.discrepancy);
    return worst;
}

ReducedBlowupResult reduced_homogeneous_blowup(const InhomogeneousConfig& cfg,
                                               std::shared_ptr<const VelocityGrid> grid,
                                               const SphereQuadrature& sq,
                                               const IntegrationControls& controls) {
    cfg.validate();
    ReducedBlowupResult out;
    EvolveResult run =
        evolve_truncated(cfg.c0, cfg.c2, cfg.kernel, std::move(grid), sq, cfg.T, controls);
    out.report = run.report;
    out.delta = run.trajectory.comparison_state.delta;
    const double margin = 1.10;
    out.predicted_bound = out.delta > 0.0 ? margin / (out.delta * cfg.c0)
                                          : std::numeric_limits<double>::infinity();
    out.predicted_within_horizon = out.predicted_bound <= cfg.T;
    if (!out.predicted_within_horizon)
        out.branch = "none";
    else if (cfg.c0 >= margin / out.delta) // blows up within unit time on height alone
        out.branch = "c0-large";
    else
        out.branch = "c1-large";
    return out;
}

} // namespace boltzgain
