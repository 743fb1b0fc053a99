#include "fundiff/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "fundiff/errors.hpp"

namespace fundiff {

ModelMatrices build_matrices(const PhysicalParams& p) {
    validate(p);
    ModelMatrices m;
    m.A << 0.0, p.omega_m, -p.omega_m, 0.0;
    m.Q << 0.0, 0.0, 0.0, 2.0 * p.gamma_total();
    m.B << 0.0, std::sqrt(2.0 * p.eta * p.gamma_env), 0.0, 0.0;
    return m;
}

Sym2 riccati_rhs(const Sym2& cov, const ModelMatrices& m) {
    const Eigen::Matrix2d s = cov.matrix();
    const Eigen::Matrix2d sb = s * m.B;
    return Sym2::from_matrix(m.A * s + s * m.A.transpose() + m.Q - sb * sb.transpose());
}

Sym2 lyapunov_rhs(const Sym2& cov, const ModelMatrices& m) {
    const Eigen::Matrix2d s = cov.matrix();
    return Sym2::from_matrix(m.A * s + s * m.A.transpose() + m.Q);
}

Sym2 sensitivity_rhs(const Sym2& cov, const Sym2& dcov, const ModelMatrices& m) {
    const Eigen::Matrix2d s = cov.matrix();
    const Eigen::Matrix2d ds = dcov.matrix();
    const Eigen::Matrix2d bbt = m.B * m.B.transpose();
    Eigen::Matrix2d dq = Eigen::Matrix2d::Zero();
    dq(1, 1) = 2.0;
    const Eigen::Matrix2d cross = ds * bbt * s;
    return Sym2::from_matrix(m.A * ds + ds * m.A.transpose() + dq - cross - cross.transpose());
}

double default_time_step(const PhysicalParams& p) { return 1e-3 * 2.0 * std::numbers::pi / p.omega_m; }

namespace {

void check_step(const PhysicalParams& p, double t_final, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive (got " + std::to_string(dt) + ")");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw ConfigError("t_final must be non-negative (got " + std::to_string(t_final) + ")");
    }
    if (dt * p.omega_m > 0.1) {
        throw ConfigError("step-size guard: dt * omega_m = " + std::to_string(dt * p.omega_m) + " exceeds 0.1");
    }
}

// Looser than is_physical: flags blow-ups, not round-off on pure states.
void check_state(const CovMat& cov, double t) {
    const bool ok = std::isfinite(cov.xx) && std::isfinite(cov.xp) && std::isfinite(cov.pp) && cov.xx > 0.0 &&
                    cov.pp > 0.0 && cov.det() >= 1.0 - 1e-8;
    if (!ok) {
        throw IntegrationError(t, "integration failure: covariance left the physical set at t = " + std::to_string(t));
    }
}

template <class State, class Rhs>
State rk4_step(const State& y, double h, const Rhs& f) {
    const State k1 = f(y);
    const State k2 = f(y + (0.5 * h) * k1);
    const State k3 = f(y + (0.5 * h) * k2);
    const State k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct PairState {
    Sym2 cov;
    Sym2 dcov;
    friend PairState operator+(const PairState& a, const PairState& b) { return {a.cov + b.cov, a.dcov + b.dcov}; }
    friend PairState operator*(double s, const PairState& a) { return {s * a.cov, s * a.dcov}; }
};

// Fixed steps of dt, the last one shortened to hit t_final.
template <class State, class Rhs, class Check>
State integrate_fixed(State y, double t_final, double dt, const Rhs& f, const Check& check) {
    if (t_final == 0.0) return y;
    const auto full_steps = static_cast<long long>(std::floor(t_final / dt * (1.0 + 1e-12)));
    for (long long k = 0; k < full_steps; ++k) {
        y = rk4_step(y, dt, f);
        check(y, static_cast<double>(k + 1) * dt);
    }
    const double rest = t_final - static_cast<double>(full_steps) * dt;
    if (rest > 1e-12 * dt) {
        y = rk4_step(y, rest, f);
        check(y, t_final);
    }
    return y;
}

}  // namespace

CovMat integrate_riccati(const CovMat& cov0, const PhysicalParams& p, double t_final, double dt) {
    check_step(p, t_final, dt);
    require_physical(cov0, "integrate_riccati");
    const auto m = build_matrices(p);
    return integrate_fixed(
        cov0, t_final, dt, [&](const Sym2& s) { return riccati_rhs(s, m); },
        [](const Sym2& s, double t) { check_state(s, t); });
}

CovMat integrate_lyapunov(const CovMat& cov0, const PhysicalParams& p, double t_final, double dt) {
    check_step(p, t_final, dt);
    require_physical(cov0, "integrate_lyapunov");
    const auto m = build_matrices(p);
    return integrate_fixed(
        cov0, t_final, dt, [&](const Sym2& s) { return lyapunov_rhs(s, m); },
        [](const Sym2& s, double t) { check_state(s, t); });
}

SensitivityPair integrate_sensitivity(const CovMat& cov0, const Sym2& dcov0, const PhysicalParams& p, double t_final,
                                      double dt) {
    check_step(p, t_final, dt);
    require_physical(cov0, "integrate_sensitivity");
    const auto m = build_matrices(p);
    const auto out = integrate_fixed(
        PairState{cov0, dcov0}, t_final, dt,
        [&](const PairState& y) { return PairState{riccati_rhs(y.cov, m), sensitivity_rhs(y.cov, y.dcov, m)}; },
        [](const PairState& y, double t) { check_state(y.cov, t); });
    return {out.cov, out.dcov};
}

ConvergedCov integrate_riccati_to_steady(const CovMat& cov0, const PhysicalParams& p, double dt, double t_max) {
    check_step(p, t_max, dt);
    require_physical(cov0, "integrate_riccati_to_steady");
    const auto m = build_matrices(p);
    const auto f = [&](const Sym2& s) { return riccati_rhs(s, m); };
    ConvergedCov out{cov0, 0.0, 0};
    int quiet = 0;
    while (out.time < t_max) {
        const CovMat next = rk4_step(out.cov, dt, f);
        ++out.steps;
        out.time = static_cast<double>(out.steps) * dt;
        check_state(next, out.time);
        const double change = (next - out.cov).norm() / next.norm();
        out.cov = next;
        quiet = change < 1e-13 ? quiet + 1 : 0;
        if (quiet >= 100) return out;
    }
    throw IntegrationError(out.time, "Riccati flow did not converge by t = " + std::to_string(t_max));
}

double upsilon(const PhysicalParams& p) {
    return std::sqrt(p.omega_m * p.omega_m + 4.0 * p.eta * p.gamma_env * p.gamma_total());
}

CovMat steady_state_analytic(const PhysicalParams& p) {
    validate(p);
    if (p.eta <= 0.0) {
        throw NoSteadyStateError("no steady state: unmonitored dynamics (eta = 0) has no damping");
    }
    const double w = p.omega_m;
    const double ups = upsilon(p);
    // Upsilon - w without cancellation for small eta G_env / w.
    const double gap = 4.0 * p.eta * p.gamma_env * p.gamma_total() / (ups + w);
    const double scale = p.eta * p.gamma_env;
    CovMat s;
    s.xx = std::sqrt(w * gap) / (std::numbers::sqrt2 * scale);
    s.xp = gap / (2.0 * scale);
    s.pp = ups * std::sqrt(gap) / (std::sqrt(2.0 * w) * scale);
    return s;
}

bool detectability(const ModelMatrices& m) {
    Eigen::EigenSolver<Eigen::Matrix2d> es(m.A);
    const double b_norm = m.B.norm();
    if (b_norm == 0.0) {
        for (int i = 0; i < 2; ++i) {
            if (es.eigenvalues()(i).real() >= 0.0) return false;
        }
        return true;
    }
    for (int i = 0; i < 2; ++i) {
        if (es.eigenvalues()(i).real() < 0.0) continue;
        const Eigen::Vector2cd x = es.eigenvectors().col(i);
        const Eigen::Vector2cd bx = m.B.cast<std::complex<double>>() * x;
        if (bx.norm() <= 1e-10 * b_norm * x.norm()) return false;
    }
    return true;
}

bool detectability(const PhysicalParams& p) { return detectability(build_matrices(p)); }

bool verify_stabilizing(const CovMat& cov, const ModelMatrices& m) {
    const Sym2 lhs = lyapunov_rhs(cov, m);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(lhs.matrix(), Eigen::EigenvaluesOnly);
    // Round-off in A sigma + sigma A^T + Q scales with its largest term.
    const double scale = std::max({1.0, (m.A * cov.matrix()).norm(), m.Q.norm()});
    return es.eigenvalues().minCoeff() >= -1e-12 * scale;
}

bool verify_stabilizing(const CovMat& cov, const PhysicalParams& p) { return verify_stabilizing(cov, build_matrices(p)); }

}  // namespace fundiff
