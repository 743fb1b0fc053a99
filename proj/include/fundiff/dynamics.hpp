#pragma once

#include <Eigen/Core>

#include "fundiff/gaussian.hpp"
#include "fundiff/params.hpp"

namespace fundiff {

/// Drift A, diffusion Q and measurement B of the monitored oscillator:
///   A = [[0, w], [-w, 0]],  Q = diag(0, 2 (G_env + G_fun)),  B_12 = sqrt(2 eta G_env).
struct ModelMatrices {
    Eigen::Matrix2d A;
    Eigen::Matrix2d Q;
    Eigen::Matrix2d B;
};

/// Covariance together with its derivative with respect to gamma_fun.
struct SensitivityPair {
    CovMat cov;
    Sym2 dcov;
};

[[nodiscard]] ModelMatrices build_matrices(const PhysicalParams& p);

/// A sigma + sigma A^T + Q - sigma B B^T sigma.
[[nodiscard]] Sym2 riccati_rhs(const Sym2& cov, const ModelMatrices& m);

/// A S + S A^T + Q (unconditional second moments).
[[nodiscard]] Sym2 lyapunov_rhs(const Sym2& cov, const ModelMatrices& m);

/// Time derivative of d sigma / d gamma_fun along the Riccati flow.
[[nodiscard]] Sym2 sensitivity_rhs(const Sym2& cov, const Sym2& dcov, const ModelMatrices& m);

/// 2 pi / omega_m * 1e-3.
[[nodiscard]] double default_time_step(const PhysicalParams& p);

/// Fixed-step RK4 propagation of the conditional covariance. The final
/// step is shortened to land on t_final exactly.
///
/// Requires dt > 0, t_final >= 0 and dt * omega_m <= 0.1. Throws
/// IntegrationError if the state leaves the physical set.
[[nodiscard]] CovMat integrate_riccati(const CovMat& cov0, const PhysicalParams& p, double t_final, double dt);

/// Same flow with the measurement term dropped. No steady state exists.
[[nodiscard]] CovMat integrate_lyapunov(const CovMat& cov0, const PhysicalParams& p, double t_final, double dt);

/// Joint RK4 propagation of (sigma, d sigma / d gamma_fun). Use a zero
/// dcov0 for parameter-independent initial states.
[[nodiscard]] SensitivityPair integrate_sensitivity(const CovMat& cov0, const Sym2& dcov0, const PhysicalParams& p,
                                                    double t_final, double dt);

/// Result of integrating the Riccati flow until it stops moving.
struct ConvergedCov {
    CovMat cov;
    double time = 0.0;
    long long steps = 0;
};

/// Integrates until the relative Frobenius change per step stays below
/// 1e-13 for 100 consecutive steps, or throws IntegrationError at t_max.
[[nodiscard]] ConvergedCov integrate_riccati_to_steady(const CovMat& cov0, const PhysicalParams& p, double dt,
                                                       double t_max);

/// Closed-form stabilizing solution of the Riccati equation. Throws
/// NoSteadyStateError for eta = 0.
[[nodiscard]] CovMat steady_state_analytic(const PhysicalParams& p);

/// sqrt(w^2 + 4 eta G_env (G_env + G_fun)).
[[nodiscard]] double upsilon(const PhysicalParams& p);

/// (B, A) detectability: B x != 0 for every eigenvector x of A with Re >= 0.
[[nodiscard]] bool detectability(const PhysicalParams& p);
[[nodiscard]] bool detectability(const ModelMatrices& m);

/// A sigma + sigma A^T + Q >= 0 (eigenvalues >= -1e-12).
[[nodiscard]] bool verify_stabilizing(const CovMat& cov, const PhysicalParams& p);
[[nodiscard]] bool verify_stabilizing(const CovMat& cov, const ModelMatrices& m);

}  // namespace fundiff
