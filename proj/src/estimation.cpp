#include "fundiff/estimation.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

#include "fundiff/errors.hpp"

namespace fundiff {

namespace {

void require_monitored(const PhysicalParams& p, const char* what) {
    validate(p);
    if (p.eta <= 0.0) {
        throw NoSteadyStateError(std::string(what) + ": no steady state for eta = 0");
    }
}

}  // namespace

PovmSpec PovmSpec::optimal_for(const PhysicalParams& p) {
    PhysicalParams ref = p;
    ref.eta = 1.0;
    ref.gamma_fun = 0.0;
    return PovmSpec{ref};
}

QfiResult qfi_gaussian(const CovMat& cov, const Sym2& dcov) {
    require_physical(cov, "qfi_gaussian");
    const double det = cov.det();
    const double mu = 1.0 / std::sqrt(det);
    const Eigen::Matrix2d m = cov.matrix().inverse() * dcov.matrix();
    const double trace_term = 0.5 * (m * m).trace() / (1.0 + mu * mu);

    // Jacobi: d det = xx' pp + xx pp' - 2 xp xp'.
    const double ddet = dcov.xx * cov.pp + cov.xx * dcov.pp - 2.0 * cov.xp * dcov.xp;
    const double dmu = -0.5 * ddet / (det * std::sqrt(det));
    const double one_minus_mu4 = (det - 1.0) * (det + 1.0) / (det * det);
    if (std::abs(one_minus_mu4) < 1e-12) {
        if (std::abs(dmu) > 1e-12) return QfiResult::diverging();
        return QfiResult::finite(trace_term);
    }
    return QfiResult::finite(trace_term + 2.0 * dmu * dmu / one_minus_mu4);
}

Sym2 dcov_steady(const PhysicalParams& p) {
    require_monitored(p, "dcov_steady");
    const CovMat s = steady_state_analytic(p);
    const double w = p.omega_m;
    const double ups = upsilon(p);
    const double dups = 2.0 * p.eta * p.gamma_env / ups;
    // d(Upsilon - w) / (2 (Upsilon - w)), written without the small difference.
    const double half_log_gap = (ups + w) / (4.0 * ups * p.gamma_total());
    Sym2 d;
    d.xx = s.xx * half_log_gap;
    d.xp = dups / (2.0 * p.eta * p.gamma_env);
    d.pp = s.pp * (dups / ups + half_log_gap);
    return d;
}

QfiResult qfi_steady_closed(const PhysicalParams& p) {
    require_monitored(p, "qfi_steady_closed");
    const double ge = p.gamma_env;
    const double gf = p.gamma_fun;
    const double gt = p.gamma_total();
    const double w = p.omega_m;
    const double ups = upsilon(p);
    // eta G_env - G_total = -((1 - eta) G_env + G_fun); vanishes only at the pole.
    const double deficit = (1.0 - p.eta) * ge + gf;
    if (deficit == 0.0) return QfiResult::diverging();
    const double num = ge * ((1.0 - p.eta) * w - (3.0 + p.eta) * ups) + gf * (w - 3.0 * ups);
    const double den = 8.0 * ups * gt * (-deficit) * (p.eta * ge + gt);
    return QfiResult::finite(num / den);
}

QfiResult qfi_eta1(double gamma_env, double gamma_fun, double omega_m) {
    validate(PhysicalParams{omega_m, gamma_env, gamma_fun, 1.0});
    if (gamma_fun == 0.0) return QfiResult::diverging();
    const double gt = gamma_env + gamma_fun;
    const double num = 3.0 + 4.0 * gamma_env / gamma_fun -
                       omega_m / std::sqrt(omega_m * omega_m + 4.0 * gamma_env * gt);
    return QfiResult::finite(num / (8.0 * gt * (2.0 * gamma_env + gamma_fun)));
}

double qfi_unmonitored_limit(const PhysicalParams& p) {
    validate(p);
    const double gt = p.gamma_total();
    return 1.0 / (4.0 * gt * gt);
}

PovmProbability povm_probability(const PhysicalParams& p, const PovmSpec& spec) {
    require_monitored(p, "povm_fi");
    const CovMat ref = steady_state_analytic(spec.reference);
    const double ref_det = ref.det();
    if (std::abs(ref_det - 1.0) > kPureTolerance) {
        throw NotPureError(ref_det, "povm_fi: POVM reference state is not pure (det sigma = " +
                                        std::to_string(ref_det) + ")");
    }
    const CovMat s = steady_state_analytic(p);
    const Sym2 ds = dcov_steady(p);

    // det(R + E) = det R + tr(adj(R) E) + det E keeps 1 - p0 accurate near R.
    const Sym2 e = 0.5 * (s - ref);
    const double det_excess = (ref_det - 1.0) + (ref.pp * e.xx + ref.xx * e.pp - 2.0 * ref.xp * e.xp) + e.det();
    const double det_mid = 1.0 + det_excess;
    const double root = std::sqrt(det_mid);
    const Sym2 mid = 0.5 * (s + ref);
    const double ddet_mid = 0.5 * (mid.pp * ds.xx + mid.xx * ds.pp - 2.0 * mid.xp * ds.xp);

    PovmProbability out;
    out.p0 = 1.0 / root;
    out.one_minus_p0 = det_excess / (root * (root + 1.0));
    out.dp0 = -0.5 * out.p0 * ddet_mid / det_mid;
    return out;
}

double povm_fi(const PhysicalParams& p, const PovmSpec& spec) {
    const auto prob = povm_probability(p, spec);
    if (prob.p0 <= 1e-14 || prob.one_minus_p0 <= 1e-14) {
        throw DegeneratePovmError("povm_fi: outcome probability p0 = " + std::to_string(prob.p0) +
                                  " is degenerate; Fisher information undefined");
    }
    return prob.dp0 * prob.dp0 / (prob.p0 * prob.one_minus_p0);
}

double snr_bound(const PhysicalParams& p, std::uint64_t m_runs) {
    require_monitored(p, "snr_bound");
    if (m_runs < 1) throw ParameterError("m_runs", "must be >= 1");
    if (p.gamma_fun == 0.0) return 0.0;
    const auto h = qfi_steady_closed(p);
    return p.gamma_fun * std::sqrt(static_cast<double>(m_runs) * h.value);
}

double snr_csl_eta1(double beta, double gamma_env, double omega_m, std::uint64_t m_runs) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta", "must be >= 0");
    validate(PhysicalParams{omega_m, gamma_env, 0.0, 1.0});
    if (m_runs < 1) throw ParameterError("m_runs", "must be >= 1");
    const double gw = gamma_env * omega_m;
    const double root = std::sqrt(omega_m * omega_m + 4.0 * gamma_env * (gamma_env + beta / omega_m));
    // beta * sqrt(X / beta) folded into sqrt(beta * X') so beta -> 0 is regular.
    const double num = 3.0 * beta + 4.0 * gw - beta * omega_m / root;
    const double den = 8.0 * (beta + gw) * (beta + 2.0 * gw);
    return std::sqrt(static_cast<double>(m_runs) * beta * num / den);
}

std::uint64_t runs_for_unit_snr(double gamma_fun, const QfiResult& qfi) {
    if (qfi.divergent) return 1;
    if (!(gamma_fun > 0.0)) throw ParameterError("gamma_fun", "must be > 0 for a finite run count");
    const double runs = std::ceil(1.0 / (gamma_fun * gamma_fun * qfi.value));
    if (!(runs < 9.0e18)) throw DomainError("runs_for_unit_snr: run count overflows");
    return static_cast<std::uint64_t>(std::max(runs, 1.0));
}

std::uint64_t runs_for_unit_snr(const PhysicalParams& p) {
    require_monitored(p, "runs_for_unit_snr");
    if (!(p.gamma_fun > 0.0)) throw ParameterError("gamma_fun", "must be > 0 for a finite run count");
    return runs_for_unit_snr(p.gamma_fun, qfi_steady_closed(p));
}

std::vector<QfiResult> qfi_finite_time_series(const PhysicalParams& p, double n_th, std::span<const double> times,
                                              double dt) {
    if (!(n_th >= 0.0) || !std::isfinite(n_th)) throw ParameterError("n_th", "must be >= 0");
    std::vector<QfiResult> out;
    out.reserve(times.size());
    SensitivityPair state{CovMat::identity(2.0 * n_th + 1.0), Sym2{}};
    double now = 0.0;
    for (double t : times) {
        if (!(t >= now)) throw ConfigError("finite-time QFI: output times must be non-decreasing and >= 0");
        state = integrate_sensitivity(state.cov, state.dcov, p, t - now, dt);
        now = t;
        out.push_back(qfi_gaussian(state.cov, state.dcov));
    }
    return out;
}

QfiResult qfi_finite_time(const PhysicalParams& p, double n_th, double t, double dt) {
    const double times[] = {t};
    return qfi_finite_time_series(p, n_th, times, dt).front();
}

}  // namespace fundiff
