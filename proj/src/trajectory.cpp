#include "fundiff/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "fundiff/dynamics.hpp"
#include "fundiff/errors.hpp"
#include "fundiff/philox.hpp"

namespace fundiff {

namespace {

constexpr std::uint64_t kStreamTag = 0x6d6f6e69746f7221ULL;  // "monitor!"
constexpr std::size_t kMaxStoredValues = std::size_t{1} << 31;

// Exact integral of e^{As} Q e^{A^T s} over one step for the rotation drift.
Sym2 discrete_diffusion(const PhysicalParams& p, double dt) {
    const double w = p.omega_m;
    const double q = 2.0 * p.gamma_total();
    const double s2 = std::sin(2.0 * w * dt) / (4.0 * w);
    return {q * (0.5 * dt - s2), q * (1.0 - std::cos(2.0 * w * dt)) / (4.0 * w), q * (0.5 * dt + s2)};
}

// G with G G^T = c, laid out so the dominant column multiplies dw_2 (the
// component B couples to). Tiny negative pivots from round-off are clamped.
Eigen::Matrix2d noise_gain(const Sym2& c) {
    const double l11 = std::sqrt(std::max(c.xx, 0.0));
    const double l21 = l11 > 0.0 ? c.xp / l11 : 0.0;
    const double l22 = std::sqrt(std::max(c.pp - l21 * l21, 0.0));
    Eigen::Matrix2d g;
    g << 0.0, l11, l22, l21;
    return g;
}

struct Plan {
    Eigen::Matrix2d rotation;
    std::vector<Eigen::Matrix2d> gains;
    std::vector<char> store;  // per step: stored?
    double b = 0.0;           // B_12
};

}  // namespace

TrajectoryResult simulate(const PhysicalParams& p, const GaussianState& state0, const TrajectoryConfig& cfg) {
    validate(p);
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(p);
    if (cfg.dt < 0.0 || !std::isfinite(cfg.dt)) throw ConfigError("trajectory.dt must be positive");
    if (dt * p.omega_m > 0.1) {
        throw ConfigError("step-size guard: dt * omega_m = " + std::to_string(dt * p.omega_m) + " exceeds 0.1");
    }
    if (cfg.n_steps < 1) throw ConfigError("trajectory.n_steps must be >= 1");
    if (cfg.n_traj < 1) throw ConfigError("trajectory.n_traj must be >= 1");
    if (cfg.stride < 1) throw ConfigError("trajectory.stride must be >= 1");
    require_physical(state0.cov, "simulate");

    TrajectoryResult out;
    out.dt = dt;
    out.n_traj = cfg.n_traj;
    const auto n_steps = static_cast<std::size_t>(cfg.n_steps);

    Plan plan;
    plan.store.assign(n_steps + 1, 0);
    for (std::size_t n = 0; n <= n_steps; ++n) {
        if (n % static_cast<std::size_t>(cfg.stride) == 0 || n == n_steps) {
            plan.store[n] = 1;
            out.steps.push_back(static_cast<std::int64_t>(n));
        }
    }
    const auto n_stored = out.steps.size();
    if (static_cast<std::size_t>(cfg.n_traj) > kMaxStoredValues / n_stored) {
        throw ConfigError("trajectory: n_traj * stored steps exceeds the storage guard");
    }

    // Deterministic part shared by every trajectory.
    const double c = std::cos(p.omega_m * dt);
    const double s = std::sin(p.omega_m * dt);
    plan.rotation << c, s, -s, c;
    plan.b = std::sqrt(2.0 * p.eta * p.gamma_env);
    const Sym2 qd = discrete_diffusion(p, dt);
    out.cov_path.reserve(n_steps + 1);
    out.cov_path.push_back(state0.cov);
    plan.gains.reserve(n_steps);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const CovMat& now = out.cov_path.back();
        const CovMat next = integrate_riccati(now, p, dt, dt);
        const Sym2 free = Sym2::from_matrix(plan.rotation * now.matrix() * plan.rotation.transpose()) + qd;
        plan.gains.push_back(noise_gain((1.0 / dt) * (free - next)));
        out.cov_path.push_back(next);
    }

    out.means.assign(static_cast<std::size_t>(cfg.n_traj) * n_stored, Eigen::Vector2d::Zero());
    if (cfg.record_output) out.record.assign(out.means.size(), Eigen::Vector2d::Zero());

    const Philox4x64 rng({cfg.seed, kStreamTag});
    const double noise_scale = cfg.inject_noise ? std::sqrt(0.5 * dt) : 0.0;

    auto run_one = [&](std::int64_t traj) -> double {
        Eigen::Vector2d m = cfg.feedback ? Eigen::Vector2d::Zero() : state0.mean;
        double max_norm = m.norm();
        std::size_t k = 0;
        const std::size_t base = static_cast<std::size_t>(traj) * n_stored;
        out.means[base + k++] = m;
        Philox4x64::Counter block{};
        for (std::size_t n = 0; n < n_steps; ++n) {
            // One Philox block feeds two steps.
            if (n % 2 == 0) block = rng({n / 2, static_cast<std::uint64_t>(traj), 0, 0});
            const std::size_t off = 2 * (n % 2);
            const double radius = std::sqrt(-2.0 * std::log(to_open_unit(block[off])));
            const double angle = 2.0 * std::numbers::pi * to_open_unit(block[off + 1]);
            const Eigen::Vector2d dw(noise_scale * radius * std::cos(angle), noise_scale * radius * std::sin(angle));

            const Eigen::Vector2d dy(dw(0), plan.b * m(0) * dt + dw(1));
            m = plan.rotation * m - plan.gains[n] * dw;
            if (cfg.feedback) m.setZero();
            max_norm = std::max(max_norm, m.norm());
            if (plan.store[n + 1]) {
                if (cfg.record_output) out.record[base + k] = dy;
                out.means[base + k++] = m;
            }
        }
        return max_norm;
    };

    const int threads = std::clamp<int>(cfg.threads, 1, static_cast<int>(std::min<std::int64_t>(cfg.n_traj, 256)));
    std::vector<double> max_norms(static_cast<std::size_t>(threads), 0.0);
    auto worker = [&](int w) {
        const std::int64_t begin = cfg.n_traj * w / threads;
        const std::int64_t end = cfg.n_traj * (w + 1) / threads;
        double local = 0.0;
        for (std::int64_t t = begin; t < end; ++t) local = std::max(local, run_one(t));
        max_norms[static_cast<std::size_t>(w)] = local;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }
    out.max_mean_norm = *std::max_element(max_norms.begin(), max_norms.end());
    return out;
}

EnsembleMoments ensemble_moments(const TrajectoryResult& result, std::size_t k) {
    if (k >= result.n_stored()) {
        throw ConfigError("ensemble_moments: stored index " + std::to_string(k) + " out of range");
    }
    const auto n = static_cast<double>(result.n_traj);
    // Two passes: mean first, then centred sums for the standard errors.
    EnsembleMoments out;
    for (std::int64_t t = 0; t < result.n_traj; ++t) {
        const auto& m = result.mean(t, k);
        out.mean += m;
        out.second += Sym2{m(0) * m(0), m(0) * m(1), m(1) * m(1)};
    }
    out.mean /= n;
    out.second = (1.0 / n) * out.second;
    if (result.n_traj < 2) return out;

    Eigen::Vector2d var_mean = Eigen::Vector2d::Zero();
    Sym2 var_second;
    for (std::int64_t t = 0; t < result.n_traj; ++t) {
        const auto& m = result.mean(t, k);
        const Eigen::Vector2d d = m - out.mean;
        var_mean += d.cwiseProduct(d);
        const Sym2 dev = Sym2{m(0) * m(0), m(0) * m(1), m(1) * m(1)} - out.second;
        var_second += Sym2{dev.xx * dev.xx, dev.xp * dev.xp, dev.pp * dev.pp};
    }
    const double denom = (n - 1.0) * n;
    out.mean_se = (var_mean / denom).cwiseSqrt();
    out.second_se = {std::sqrt(var_second.xx / denom), std::sqrt(var_second.xp / denom),
                     std::sqrt(var_second.pp / denom)};
    return out;
}

std::vector<TotalVarianceCheck> total_variance_check(const TrajectoryResult& result, const PhysicalParams& p,
                                                     const GaussianState& state0) {
    const Eigen::Vector2d& m0 = state0.mean;
    CovMat uncond = state0.cov + Sym2{2.0 * m0(0) * m0(0), 2.0 * m0(0) * m0(1), 2.0 * m0(1) * m0(1)};
    double now = 0.0;
    std::vector<TotalVarianceCheck> out;
    for (std::size_t k = 0; k < result.n_stored(); ++k) {
        const double t = result.time(k);
        uncond = integrate_lyapunov(uncond, p, t - now, result.dt);
        now = t;
        const auto mom = ensemble_moments(result, k);
        TotalVarianceCheck row;
        row.t = t;
        row.conditional_total = result.cov_path[static_cast<std::size_t>(result.steps[k])] + 2.0 * mom.second;
        row.unconditional = uncond;
        const Sym2 diff = row.conditional_total - uncond;
        auto z = [](double d, double se) {
            if (se > 0.0) return d / (2.0 * se);
            return std::abs(d) <= 1e-9 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), d);
        };
        row.z = {z(diff.xx, mom.second_se.xx), z(diff.xp, mom.second_se.xp), z(diff.pp, mom.second_se.pp)};
        out.push_back(row);
    }
    return out;
}

}  // namespace fundiff
