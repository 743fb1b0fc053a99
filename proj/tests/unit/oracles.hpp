#pragma once

// Test-only reference evaluations, kept independent of the library's
// implementation paths.

#include <cmath>
#include <random>

#include "fundiff/dynamics.hpp"
#include "fundiff/gaussian.hpp"
#include "fundiff/params.hpp"

namespace fundiff::oracle {

/// Perfect-monitoring QFI typed in directly from its closed form.
inline double qfi_eta1_formula(double ge, double gf, double w) {
    return (3.0 + 4.0 * ge / gf - w / std::sqrt(w * w + 4.0 * ge * (ge + gf))) / (8.0 * (ge + gf) * (2.0 * ge + gf));
}

/// Perfect-monitoring SNR bound in its ratio form.
inline double snr_eta1_formula(double ge, double gf, double w, double m) {
    const double r = gf / ge;
    const double inner = 3.0 + 4.0 / r - std::sqrt(1.0 / (1.0 + 4.0 * ge * ge / (w * w) + 4.0 * gf * ge / (w * w)));
    return std::sqrt(m) * r * std::sqrt(inner / (8.0 * (1.0 + r) * (2.0 + r)));
}

/// Central difference of the analytic steady state in gamma_fun.
inline Sym2 dcov_steady_fd(const PhysicalParams& p, double h) {
    const auto plus = steady_state_analytic(p.with_gamma_fun(p.gamma_fun + h));
    const auto minus = steady_state_analytic(p.with_gamma_fun(p.gamma_fun - h));
    return (1.0 / (2.0 * h)) * (plus - minus);
}

/// Gaussian QFI by brute force: 1/2 Tr[(s^-1 s')^2]/(1+mu^2) + 2 mu'^2/(1-mu^4)
/// with mu' from a central difference of the purity along s + h s'.
inline double qfi_bruteforce(const Sym2& s, const Sym2& ds) {
    const double det = s.det();
    const double inv_xx = s.pp / det, inv_xp = -s.xp / det, inv_pp = s.xx / det;
    // M = s^-1 s'
    const double m00 = inv_xx * ds.xx + inv_xp * ds.xp;
    const double m01 = inv_xx * ds.xp + inv_xp * ds.pp;
    const double m10 = inv_xp * ds.xx + inv_pp * ds.xp;
    const double m11 = inv_xp * ds.xp + inv_pp * ds.pp;
    const double tr_m2 = m00 * m00 + 2.0 * m01 * m10 + m11 * m11;
    const double mu = 1.0 / std::sqrt(det);
    const double h = 1e-6;
    const double dmu = (1.0 / std::sqrt((s + h * ds).det()) - 1.0 / std::sqrt((s + (-h) * ds).det())) / (2.0 * h);
    return 0.5 * tr_m2 / (1.0 + mu * mu) + 2.0 * dmu * dmu / (1.0 - std::pow(mu, 4));
}

/// Random physical covariance: rotated squeezed thermal state.
inline CovMat random_physical(std::mt19937_64& rng, double max_nu = 5.0) {
    std::uniform_real_distribution<double> nu_d(1.0, max_nu), r_d(-1.0, 1.0), th_d(0.0, 3.14159);
    const double nu = nu_d(rng), r = r_d(rng), th = th_d(rng);
    const double c = std::cos(th), s = std::sin(th), a = nu * std::exp(2 * r), b = nu * std::exp(-2 * r);
    return {c * c * a + s * s * b, c * s * (a - b), s * s * a + c * c * b};
}

inline PhysicalParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ge_d(0.01, 0.5), ratio_d(0.0, 1.0), eta_d(0.05, 1.0);
    const double ge = ge_d(rng);
    return {1.0, ge, ratio_d(rng) * ge, eta_d(rng)};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel_err(const Sym2& a, const Sym2& b) { return (a - b).norm() / b.norm(); }

}  // namespace fundiff::oracle
