#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fundiff/dynamics.hpp"
#include "fundiff/errors.hpp"
#include "fundiff/gaussian.hpp"
#include "oracles.hpp"

namespace fundiff {
namespace {

TEST(Purity, VacuumThermalAndMixed) {
    EXPECT_EQ(purity(CovMat::identity()), 1.0);
    EXPECT_DOUBLE_EQ(purity(CovMat::identity(201.0)), 1.0 / 201.0);
    // det = 1.1
    EXPECT_NEAR(purity(CovMat{1.1, 0.0, 1.0}), 0.9534625892455922, 1e-15);
    EXPECT_THROW((void)purity(CovMat::diag(0.5, 0.5)), InvalidStateError);
}

TEST(IsPhysical, UncertaintyBound) {
    EXPECT_TRUE(is_physical(CovMat::identity()));
    EXPECT_FALSE(is_physical(CovMat::diag(0.5, 0.5)));
    EXPECT_TRUE(is_physical(CovMat::diag(4.0, 0.25)));
    EXPECT_FALSE(is_physical(CovMat{-2.0, 0.0, -2.0}));
    EXPECT_FALSE(is_physical(CovMat{1.0, 0.0, std::nan("")}));
    EXPECT_TRUE(is_physical(CovMat::diag(1.0, 1.0 - 1e-13)));
    EXPECT_FALSE(is_physical(CovMat::diag(1.0, 1.0 - 1e-10)));
}

TEST(Overlap, KnownValues) {
    EXPECT_EQ(overlap(CovMat::identity(), CovMat::identity()), 1.0);
    EXPECT_NEAR(overlap(CovMat::identity(), CovMat::identity(2.0)), 2.0 / 3.0, 1e-15);
    const auto ss = steady_state_analytic({1.0, 0.1, 0.01, 1.0});
    EXPECT_NEAR(overlap(ss, ss), 0.9534625892455922, 1e-12);
    EXPECT_THROW((void)overlap(CovMat::diag(0.5, 0.5), CovMat::identity()), InvalidStateError);
}

TEST(Overlap, PropertiesOnRandomPairs) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto a = oracle::random_physical(rng);
        const auto b = oracle::random_physical(rng);
        const double ab = overlap(a, b);
        EXPECT_NEAR(ab, overlap(b, a), 1e-12);
        EXPECT_GT(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_NEAR(overlap(a, a), purity(a), 1e-12);
    }
}

TEST(FactorPure, DiagonalCases) {
    const auto vac = factor_pure(CovMat::identity());
    EXPECT_EQ(vac.r, 0.0);
    EXPECT_EQ(vac.theta, 0.0);
    const auto sq = factor_pure(CovMat::diag(std::exp(2.0), std::exp(-2.0)));
    EXPECT_NEAR(sq.r, 1.0, 1e-14);
    EXPECT_NEAR(sq.theta, 0.0, 1e-14);
    // Squeezed along p: rotation by pi/2.
    const auto sp = factor_pure(CovMat::diag(0.25, 4.0));
    EXPECT_NEAR(sp.r, std::log(2.0), 1e-14);
    EXPECT_NEAR(sp.theta, std::numbers::pi / 2, 1e-14);
}

TEST(FactorPure, SteadyStateReconstruction) {
    const auto ss = steady_state_analytic({1.0, 0.1, 0.0, 1.0});
    const auto f = factor_pure(ss);
    EXPECT_GE(f.r, 0.0);
    EXPECT_GE(f.theta, 0.0);
    EXPECT_LT(f.theta, std::numbers::pi);
    EXPECT_LT(oracle::rel_err(f.reconstruct(), ss), 1e-10);
}

TEST(FactorPure, RandomPureStatesRoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r_d(0.0, 2.0), th_d(0.0, std::numbers::pi);
    for (int i = 0; i < 1000; ++i) {
        const SqueezeFactorization truth{r_d(rng), th_d(rng)};
        const auto cov = truth.reconstruct();
        const auto f = factor_pure(cov);
        EXPECT_LT(oracle::rel_err(f.reconstruct(), cov), 1e-10);
    }
}

TEST(FactorPure, RejectsMixedStates) {
    try {
        (void)factor_pure(CovMat::identity(1.1));
        FAIL();
    } catch (const NotPureError& e) {
        EXPECT_NEAR(e.det(), 1.21, 1e-12);
    }
}

}  // namespace
}  // namespace fundiff
