#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fundiff/gaussian.hpp"
#include "fundiff/params.hpp"

namespace fundiff {

struct TrajectoryConfig {
    double dt = 0.0;  ///< 0 selects default_time_step
    std::int64_t n_steps = 1000;
    std::int64_t n_traj = 100;
    std::uint64_t seed = 0;
    bool feedback = false;
    bool record_output = false;
    /// Means (and records) are stored every `stride` steps; step 0 and the
    /// final step are always stored.
    std::int64_t stride = 1;
    int threads = 1;
    /// Test hook: false sets every Wiener increment to zero.
    bool inject_noise = true;
};

/// Conditional first moments of an ensemble of monitored trajectories.
///
/// Means are laid out trajectory-major: `mean(traj, k)` is the mean of
/// trajectory `traj` at stored index k, i.e. at step `steps[k]`.
struct TrajectoryResult {
    double dt = 0.0;
    std::int64_t n_traj = 0;
    std::vector<std::int64_t> steps;  ///< stored step numbers
    std::vector<CovMat> cov_path;     ///< sigma at every step 0..n_steps
    std::vector<Eigen::Vector2d> means;
    /// dy for the step ending at each stored index (k >= 1); zero at k = 0.
    std::vector<Eigen::Vector2d> record;
    double max_mean_norm = 0.0;  ///< over all trajectories and all steps

    [[nodiscard]] std::size_t n_stored() const { return steps.size(); }
    [[nodiscard]] const Eigen::Vector2d& mean(std::int64_t traj, std::size_t k) const {
        return means[static_cast<std::size_t>(traj) * steps.size() + k];
    }
    [[nodiscard]] double time(std::size_t k) const { return static_cast<double>(steps[k]) * dt; }
};

/// Integrates the conditional-mean SDE
///   d<r> = A <r> dt - sigma B dw,   {dw, dw^T} = 1 dt (each component has variance dt/2),
/// with sigma following the deterministic Riccati flow. The drift is applied
/// through its exact rotation and the noise gain is matched to the one-step
/// covariance drop, so sigma + 2 E[<r><r>^T] tracks the unconditional second
/// moments at the discrete level. With feedback the mean is displaced back to
/// the origin after every step. The record is dy = B^T <r> dt + dw.
[[nodiscard]] TrajectoryResult simulate(const PhysicalParams& p, const GaussianState& state0,
                                        const TrajectoryConfig& cfg);

struct EnsembleMoments {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
    Sym2 second;     ///< E[<r><r>^T]
    Sym2 second_se;  ///< entrywise standard error of `second`
};

/// Sample moments across trajectories at stored index k.
[[nodiscard]] EnsembleMoments ensemble_moments(const TrajectoryResult& result, std::size_t k);

/// Residual of the law of total variance at one stored index, in the
/// vacuum-is-identity convention: sigma + 2 E[<r><r>^T] - Sigma_uncond.
struct TotalVarianceCheck {
    double t = 0.0;
    Sym2 conditional_total;  ///< sigma + 2 E[<r><r>^T]
    Sym2 unconditional;      ///< Lyapunov solution
    Sym2 z;                  ///< residual / (2 * standard error), entrywise
};

/// Compares every stored index against integrate_lyapunov started from
/// state0.cov + 2 mean0 mean0^T.
[[nodiscard]] std::vector<TotalVarianceCheck> total_variance_check(const TrajectoryResult& result,
                                                                   const PhysicalParams& p,
                                                                   const GaussianState& state0);

}  // namespace fundiff
