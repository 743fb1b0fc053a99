#pragma once

#include <array>

#include <Eigen/Core>

namespace fundiff {

/// Real symmetric 2x2 matrix stored by its three independent entries.
///
/// Used both for covariance matrices and for their parameter derivatives.
/// Covariances follow the anticommutator convention
/// sigma_jk = <{dr_j, dr_k}>, so the vacuum is the identity and the
/// uncertainty relation reads det(sigma) >= 1. (With the more common
/// 1/2-symmetrized convention, divide every entry by 2.)
struct Sym2 {
    double xx = 0.0;
    double xp = 0.0;
    double pp = 0.0;

    static constexpr Sym2 identity(double scale = 1.0) { return {scale, 0.0, scale}; }
    static constexpr Sym2 diag(double a, double b) { return {a, 0.0, b}; }
    /// Symmetric part of a general 2x2 matrix.
    static Sym2 from_matrix(const Eigen::Matrix2d& m);

    [[nodiscard]] Eigen::Matrix2d matrix() const;
    [[nodiscard]] double det() const { return xx * pp - xp * xp; }
    [[nodiscard]] double trace() const { return xx + pp; }
    [[nodiscard]] double max_abs() const;
    /// Frobenius norm (off-diagonal counted twice).
    [[nodiscard]] double norm() const;

    Sym2& operator+=(const Sym2& o) {
        xx += o.xx;
        xp += o.xp;
        pp += o.pp;
        return *this;
    }
    friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
    friend Sym2 operator-(const Sym2& a, const Sym2& b) { return {a.xx - b.xx, a.xp - b.xp, a.pp - b.pp}; }
    friend Sym2 operator*(double s, const Sym2& a) { return {s * a.xx, s * a.xp, s * a.pp}; }
    friend bool operator==(const Sym2&, const Sym2&) = default;
};

/// Covariance matrix of a single-mode Gaussian state.
using CovMat = Sym2;

struct GaussianState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    CovMat cov = CovMat::identity();
};

/// sigma = R(theta) diag(e^{2r}, e^{-2r}) R(theta)^T.
struct SqueezeFactorization {
    double r = 0.0;
    double theta = 0.0;  ///< in [0, pi)

    [[nodiscard]] CovMat reconstruct() const;
};

inline constexpr double kPhysicalTolerance = 1e-12;
inline constexpr double kPureTolerance = 1e-9;

/// Positive definite with det >= 1 - 1e-12.
[[nodiscard]] bool is_physical(const CovMat& cov);

/// Tr[rho^2] = 1/sqrt(det sigma). Throws InvalidStateError when unphysical.
[[nodiscard]] double purity(const CovMat& cov);

/// Tr[rho_a rho_b] for zero-mean states: 1/sqrt(det((a+b)/2)).
[[nodiscard]] double overlap(const CovMat& a, const CovMat& b);

/// Squeezing and rotation of a pure covariance. Throws NotPureError when
/// |det - 1| > 1e-9.
[[nodiscard]] SqueezeFactorization factor_pure(const CovMat& cov);

/// Throws InvalidStateError with `what` as context.
void require_physical(const CovMat& cov, const char* what);

}  // namespace fundiff
