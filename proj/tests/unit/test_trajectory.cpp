#include <gtest/gtest.h>

#include <cmath>

#include "fundiff/dynamics.hpp"
#include "fundiff/errors.hpp"
#include "fundiff/philox.hpp"
#include "fundiff/trajectory.hpp"

namespace fundiff {
namespace {

constexpr PhysicalParams kParams{1.0, 0.1, 0.01, 1.0};

GaussianState thermal(double n_th, double x0 = 0.0, double p0 = 0.0) {
    GaussianState s;
    s.cov = CovMat::identity(2.0 * n_th + 1.0);
    s.mean = Eigen::Vector2d(x0, p0);
    return s;
}

TEST(Philox, KnownAnswers) {
    const Philox4x64 zero_key({0, 0});
    const auto a = zero_key({0, 0, 0, 0});
    EXPECT_EQ(a[0], 0x16554d9eca36314cULL);
    EXPECT_EQ(a[1], 0xdb20fe9d672d0fdcULL);
    EXPECT_EQ(a[2], 0xd7e772cee186176bULL);
    EXPECT_EQ(a[3], 0x7e68b68aec7ba23bULL);
    const auto b = zero_key({1, 0, 0, 0});
    EXPECT_EQ(b[0], 0x02f4ba6408e4d89bULL);
    EXPECT_EQ(b[1], 0x3dd62b0b9ca8c5b2ULL);
    EXPECT_EQ(b[2], 0x1c8667a55d902e79ULL);
    EXPECT_EQ(b[3], 0x907d7a052fd5b4dcULL);
}

TEST(Philox, OpenUnitInterval) {
    EXPECT_GT(to_open_unit(0), 0.0);
    EXPECT_LT(to_open_unit(~0ULL), 1.0);
}

TEST(Simulate, NoiselessMeanRotates) {
    TrajectoryConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 700;
    cfg.n_traj = 2;
    cfg.inject_noise = false;
    const auto r = simulate(kParams, thermal(0.0, 1.5, -0.5), cfg);
    ASSERT_EQ(r.n_stored(), 701u);
    for (std::size_t k = 0; k < r.n_stored(); k += 50) {
        const double t = r.time(k);
        const Eigen::Vector2d expect(1.5 * std::cos(t) - 0.5 * std::sin(t), -1.5 * std::sin(t) - 0.5 * std::cos(t));
        EXPECT_LT((r.mean(1, k) - expect).norm(), 1e-12) << t;
    }
}

TEST(Simulate, FeedbackPinsMeanToOrigin) {
    TrajectoryConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 500;
    cfg.n_traj = 50;
    cfg.feedback = true;
    const auto r = simulate(kParams, thermal(5.0, 2.0, 1.0), cfg);
    EXPECT_LE(r.max_mean_norm, 1e-10);
}

TEST(Simulate, DeterministicAcrossThreads) {
    TrajectoryConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 300;
    cfg.n_traj = 37;
    cfg.stride = 7;
    cfg.record_output = true;
    const auto a = simulate(kParams, thermal(2.0), cfg);
    cfg.threads = 4;
    const auto b = simulate(kParams, thermal(2.0), cfg);
    ASSERT_EQ(a.means.size(), b.means.size());
    for (std::size_t i = 0; i < a.means.size(); ++i) {
        EXPECT_EQ(a.means[i], b.means[i]);
        EXPECT_EQ(a.record[i], b.record[i]);
    }
    EXPECT_EQ(a.steps.back(), 300);
    EXPECT_EQ(a.steps[1], 7);
}

TEST(Simulate, SeedChangesMeansButNotCovariance) {
    TrajectoryConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 100;
    cfg.n_traj = 4;
    const auto a = simulate(kParams, thermal(1.0), cfg);
    cfg.seed = 99;
    const auto b = simulate(kParams, thermal(1.0), cfg);
    EXPECT_NE(a.means.back(), b.means.back());
    ASSERT_EQ(a.cov_path.size(), 101u);
    for (std::size_t i = 0; i < a.cov_path.size(); ++i) EXPECT_EQ(a.cov_path[i], b.cov_path[i]);
    EXPECT_LT((a.cov_path.back() - integrate_riccati(thermal(1.0).cov, kParams, 1.0, 1e-2)).max_abs(), 1e-12);
}

TEST(Simulate, ConfigGuards) {
    TrajectoryConfig cfg;
    cfg.dt = 0.5;
    EXPECT_THROW((void)simulate(kParams, thermal(0.0), cfg), ConfigError);
    cfg.dt = 1e-2;
    cfg.n_traj = 0;
    EXPECT_THROW((void)simulate(kParams, thermal(0.0), cfg), ConfigError);
}

TEST(EnsembleMoments, SingleTrajectory) {
    TrajectoryConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 10;
    cfg.n_traj = 1;
    const auto r = simulate(kParams, thermal(0.0), cfg);
    const auto m = ensemble_moments(r, 10);
    EXPECT_EQ(m.mean, r.mean(0, 10));
    EXPECT_EQ(m.mean_se, Eigen::Vector2d::Zero());
    EXPECT_THROW((void)ensemble_moments(r, 11), ConfigError);
}

class TotalVariance : public ::testing::TestWithParam<double> {};

TEST_P(TotalVariance, ConditionalPlusSpreadMatchesUnconditional) {
    const auto p = kParams.with_eta(GetParam());
    TrajectoryConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_steps = 1500;
    cfg.n_traj = 4000;
    cfg.stride = 100;
    cfg.threads = 4;
    const auto s0 = thermal(3.0, 0.5, 0.0);
    const auto r = simulate(p, s0, cfg);
    const auto rows = total_variance_check(r, p, s0);
    ASSERT_EQ(rows.size(), 16u);
    for (const auto& row : rows) {
        EXPECT_LT(std::abs(row.z.xx), 4.5) << row.t;
        EXPECT_LT(std::abs(row.z.xp), 4.5) << row.t;
        EXPECT_LT(std::abs(row.z.pp), 4.5) << row.t;
    }
    // The mean spread carries real weight: dropping it breaks the balance.
    const auto& last = rows.back();
    const auto mom = ensemble_moments(r, r.n_stored() - 1);
    const double half = (last.conditional_total - mom.second - last.unconditional).xx;
    EXPECT_GT(std::abs(half) / mom.second_se.xx, 10.0);
}

INSTANTIATE_TEST_SUITE_P(Efficiencies, TotalVariance, ::testing::Values(0.3, 0.7, 1.0));

}  // namespace
}  // namespace fundiff
