#include "fundiff/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fundiff/errors.hpp"

namespace fundiff {

Sym2 Sym2::from_matrix(const Eigen::Matrix2d& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

Eigen::Matrix2d Sym2::matrix() const {
    Eigen::Matrix2d m;
    m << xx, xp, xp, pp;
    return m;
}

double Sym2::max_abs() const { return std::max({std::abs(xx), std::abs(xp), std::abs(pp)}); }

double Sym2::norm() const { return std::sqrt(xx * xx + 2.0 * xp * xp + pp * pp); }

bool is_physical(const CovMat& cov) {
    if (!std::isfinite(cov.xx) || !std::isfinite(cov.xp) || !std::isfinite(cov.pp)) return false;
    // det >= 1 together with xx > 0 implies positive definiteness.
    return cov.xx > 0.0 && cov.pp > 0.0 && cov.det() >= 1.0 - kPhysicalTolerance;
}

void require_physical(const CovMat& cov, const char* what) {
    if (!is_physical(cov)) {
        throw InvalidStateError(std::string(what) + ": covariance is not physical (xx=" +
                                std::to_string(cov.xx) + ", xp=" + std::to_string(cov.xp) +
                                ", pp=" + std::to_string(cov.pp) + ", det=" + std::to_string(cov.det()) +
                                ")");
    }
}

double purity(const CovMat& cov) {
    require_physical(cov, "purity");
    return std::min(1.0, 1.0 / std::sqrt(cov.det()));
}

double overlap(const CovMat& a, const CovMat& b) {
    require_physical(a, "overlap");
    require_physical(b, "overlap");
    const CovMat mid = 0.5 * (a + b);
    return std::min(1.0, 1.0 / std::sqrt(mid.det()));
}

SqueezeFactorization factor_pure(const CovMat& cov) {
    require_physical(cov, "factor_pure");
    const double det = cov.det();
    if (std::abs(det - 1.0) > kPureTolerance) {
        throw NotPureError(det, "factor_pure: state is not pure (det sigma = " + std::to_string(det) + ")");
    }
    // Eigenvalues (t/2) +- d with t = trace, d = sqrt(((xx - pp)/2)^2 + xp^2).
    const double half_diff = 0.5 * (cov.xx - cov.pp);
    const double spread = std::hypot(half_diff, cov.xp);
    const double lambda_max = 0.5 * cov.trace() + spread;
    SqueezeFactorization f;
    f.r = 0.25 * std::log(lambda_max / (0.5 * cov.trace() - spread));
    if (spread == 0.0) {
        f.r = 0.0;
        f.theta = 0.0;
        return f;
    }
    // Principal axis of the larger eigenvalue.
    double theta = 0.5 * std::atan2(cov.xp, half_diff);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    f.theta = theta;
    return f;
}

CovMat SqueezeFactorization::reconstruct() const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double big = std::exp(2.0 * r);
    const double small = std::exp(-2.0 * r);
    return {c * c * big + s * s * small, c * s * (big - small), s * s * big + c * c * small};
}

}  // namespace fundiff
