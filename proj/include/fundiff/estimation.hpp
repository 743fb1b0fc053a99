#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fundiff/dynamics.hpp"
#include "fundiff/gaussian.hpp"
#include "fundiff/params.hpp"

namespace fundiff {

/// Fisher information for gamma_fun, in inverse squared rate units.
///
/// `divergent` marks the pure-state pole (mu = 1 with mu' != 0); `value` is
/// +inf there and must not be serialized as a number.
struct QfiResult {
    double value = 0.0;
    bool divergent = false;

    static QfiResult finite(double v) { return {v, false}; }
    static QfiResult diverging() { return {std::numeric_limits<double>::infinity(), true}; }
};

/// Dichotomic measurement {|psi><psi|, 1 - |psi><psi|} projecting on the
/// steady state of `reference`, which must be pure.
struct PovmSpec {
    PhysicalParams reference;

    /// Projector on the eta = 1, gamma_fun = 0 steady state for the same
    /// omega_m and gamma_env.
    static PovmSpec optimal_for(const PhysicalParams& p);
};

/// Gaussian QFI of a zero-mean family:
///   H = 1/2 Tr[(s^-1 s')^2] / (1 + mu^2) + 2 mu'^2 / (1 - mu^4),  mu = det(s)^(-1/2).
[[nodiscard]] QfiResult qfi_gaussian(const CovMat& cov, const Sym2& dcov);

/// d sigma_ss / d gamma_fun in closed form. Throws NoSteadyStateError for eta = 0.
[[nodiscard]] Sym2 dcov_steady(const PhysicalParams& p);

/// Closed-form steady-state QFI. Divergent exactly at eta = 1, gamma_fun = 0.
[[nodiscard]] QfiResult qfi_steady_closed(const PhysicalParams& p);

/// Perfect-monitoring QFI
///   (3 + 4 G_env/G_fun - w / sqrt(w^2 + 4 G_env (G_env + G_fun))) / (8 (G_env + G_fun)(2 G_env + G_fun)).
[[nodiscard]] QfiResult qfi_eta1(double gamma_env, double gamma_fun, double omega_m);

/// eta -> 0+ limit of the steady-state QFI: 1 / (4 (G_env + G_fun)^2).
[[nodiscard]] double qfi_unmonitored_limit(const PhysicalParams& p);

/// Outcome probability of the projector and its gamma_fun derivative.
struct PovmProbability {
    double p0 = 0.0;
    double one_minus_p0 = 0.0;
    double dp0 = 0.0;
};

[[nodiscard]] PovmProbability povm_probability(const PhysicalParams& p, const PovmSpec& spec);

/// Classical Fisher information of the dichotomic POVM at the steady state
/// of `p`: (dp0/dG)^2 / (p0 (1 - p0)). Throws DegeneratePovmError when p0
/// is within 1e-14 of 0 or 1.
[[nodiscard]] double povm_fi(const PhysicalParams& p, const PovmSpec& spec);

/// QCRB-saturating signal-to-noise ratio G_fun sqrt(M H_ss).
[[nodiscard]] double snr_bound(const PhysicalParams& p, std::uint64_t m_runs);

/// Perfect-monitoring SNR bound written in terms of beta = alpha hbar lambda / (m r_c^2).
[[nodiscard]] double snr_csl_eta1(double beta, double gamma_env, double omega_m, std::uint64_t m_runs);

/// Smallest M with snr_bound >= 1: ceil(1 / (G_fun^2 H_ss)). 1 when H_ss diverges.
[[nodiscard]] std::uint64_t runs_for_unit_snr(const PhysicalParams& p);

/// ceil(1 / (G_fun^2 H)) for an arbitrary Fisher information H.
[[nodiscard]] std::uint64_t runs_for_unit_snr(double gamma_fun, const QfiResult& qfi);

/// QFI of the conditional state at time t, starting from the thermal state
/// sigma(0) = (2 n_th + 1) I with a parameter-independent sigma'(0) = 0.
[[nodiscard]] QfiResult qfi_finite_time(const PhysicalParams& p, double n_th, double t, double dt);

/// Same, evaluated at every entry of a non-decreasing time grid in one pass.
[[nodiscard]] std::vector<QfiResult> qfi_finite_time_series(const PhysicalParams& p, double n_th,
                                                            std::span<const double> times, double dt);

}  // namespace fundiff
