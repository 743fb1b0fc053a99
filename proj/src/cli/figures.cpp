#include <cmath>
#include <numbers>
#include <string>

#include "fundiff/cli.hpp"
#include "fundiff/dynamics.hpp"
#include "fundiff/errors.hpp"
#include "fundiff/estimation.hpp"

namespace fundiff::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Levitated-nanosphere parameters of the finite-time and run-count figures.
constexpr double kSiOmega = kTwoPi * 135e3;
constexpr double kSiGammaEnv = kTwoPi * 11e3;

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format_number(values[i]);
    return out;
}

struct BaseParams {
    UnitMode units;
    double omega_m;
    double gamma_env;
};

BaseParams read_base(const Config& cfg, BaseParams defaults) {
    BaseParams b = defaults;
    if (auto u = cfg.get_string("units")) b.units = unit_mode_from_string(*u);
    b.omega_m = cfg.get_double("omega_m", b.omega_m);
    b.gamma_env = cfg.get_double("gamma_env", b.gamma_env);
    validate(PhysicalParams{b.omega_m, b.gamma_env, 0.0, 1.0});
    return b;
}

void put_base(Table& t, const BaseParams& b) {
    t.add_header("units", std::string(to_string(b.units)));
    t.add_header("omega_m", format_number(b.omega_m));
    t.add_header("gamma_env", format_number(b.gamma_env));
}

std::vector<double> linear_grid(double lo, double hi, long long points, const std::string& name) {
    if (points < 2) throw ConfigError(name + ": point count must be >= 2");
    std::vector<double> out(static_cast<std::size_t>(points));
    for (long long i = 0; i < points; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    out.back() = hi;
    return out;
}

Cell qfi_cell(const QfiResult& q) { return q.divergent ? Cell{} : Cell{q.value}; }

}  // namespace

std::string tool_version() { return "fundiff " FUNDIFF_VERSION; }

double backed_out_gamma_fun(double gamma_env, double unmonitored_runs) {
    const double ratio = 0.5 * std::sqrt(unmonitored_runs);  // (G_env + G_fun) / G_fun
    if (!(ratio > 1.0)) throw ParameterError("fig3.unmonitored_runs", "must exceed 4");
    return gamma_env / (ratio - 1.0);
}

Table steady_table(const Config& cfg) {
    const auto rp = read_run_params(cfg, RunParams{UnitMode::natural, PhysicalParams{1.0, 0.1, 0.0, 1.0}, {}});
    cfg.require_all_used();
    const auto& p = rp.physical;

    Table t;
    t.banner = tool_version() + " | steady";
    t.add_header("units", std::string(to_string(rp.units)));
    t.add_header("omega_m", format_number(p.omega_m));
    t.add_header("gamma_env", format_number(p.gamma_env));
    if (rp.csl) {
        t.add_header("csl.lambda_csl", format_number(rp.csl->lambda_csl));
        t.add_header("csl.r_c", format_number(rp.csl->r_c));
        t.add_header("csl.mass", format_number(rp.csl->mass));
        t.add_header("csl.alpha", format_number(rp.csl->alpha));
        t.add_header("csl.hbar", format_number(rp.csl->hbar));
        t.notes.push_back("gamma_fun derived from the csl block: " + format_number(p.gamma_fun));
    } else {
        t.add_header("gamma_fun", format_number(p.gamma_fun));
    }
    t.add_header("eta", format_number(p.eta));

    const CovMat s = steady_state_analytic(p);
    const auto h = qfi_steady_closed(p);
    t.columns = {"sigma_xx", "sigma_xp", "sigma_pp", "det", "purity", "detectable", "stabilizing", "H_ss", "divergent"};
    t.rows.push_back({s.xx, s.xp, s.pp, s.det(), purity(s), detectability(p), verify_stabilizing(s, p), qfi_cell(h),
                      h.divergent});
    return t;
}

namespace {

Table figure1(const Config& cfg) {
    const auto b = read_base(cfg, {UnitMode::natural, 1.0, 0.1});
    const auto gammas =
        cfg.get_doubles("fig1.gamma_fun_values").value_or(std::vector{b.omega_m / 100, b.omega_m / 40, b.omega_m / 20});
    const auto etas = linear_grid(cfg.get_double("fig1.eta_min", 0.01), cfg.get_double("fig1.eta_max", 1.0),
                                  cfg.get_int("fig1.eta_points", 100), "fig1.eta_points");
    cfg.require_all_used();

    Table t;
    t.banner = tool_version() + " | figure 1";
    put_base(t, b);
    t.add_header("fig1.gamma_fun_values", join_numbers(gammas));
    t.add_header("fig1.eta_min", format_number(etas.front()));
    t.add_header("fig1.eta_max", format_number(etas.back()));
    t.add_header("fig1.eta_points", std::to_string(etas.size()));
    t.columns = {"eta", "gamma_fun", "H_ss", "divergent", "status"};
    for (double gf : gammas) {
        for (double eta : etas) {
            const PhysicalParams p{b.omega_m, b.gamma_env, gf, eta};
            validate(p);
            if (eta == 0.0) {
                t.rows.push_back({eta, gf, Cell{}, false, std::string("no_steady_state")});
                continue;
            }
            const auto h = qfi_steady_closed(p);
            t.rows.push_back({eta, gf, qfi_cell(h), h.divergent, std::string(h.divergent ? "divergent" : "ok")});
        }
    }
    return t;
}

Table figure2(const Config& cfg, int threads) {
    const auto b = read_base(cfg, {UnitMode::natural, 1.0, 0.1});
    const auto etas = linear_grid(cfg.get_double("fig2.eta_min", 0.5), cfg.get_double("fig2.eta_max", 1.0),
                                  cfg.get_int("fig2.eta_points", 51), "fig2.eta_points");
    const auto ratios = linear_grid(cfg.get_double("fig2.ratio_min", 0.0), cfg.get_double("fig2.ratio_max", 1.0),
                                    cfg.get_int("fig2.ratio_points", 51), "fig2.ratio_points");
    cfg.require_all_used();

    Table t;
    t.banner = tool_version() + " | figure 2";
    put_base(t, b);
    t.add_header("fig2.eta_min", format_number(etas.front()));
    t.add_header("fig2.eta_max", format_number(etas.back()));
    t.add_header("fig2.eta_points", std::to_string(etas.size()));
    t.add_header("fig2.ratio_min", format_number(ratios.front()));
    t.add_header("fig2.ratio_max", format_number(ratios.back()));
    t.add_header("fig2.ratio_points", std::to_string(ratios.size()));
    t.notes.push_back("POVM projects on the eta = 1, gamma_fun = 0 steady state");
    t.columns = {"eta", "gamma_ratio", "gamma_fun", "FI", "QFI", "ratio", "divergent", "status"};

    const PovmSpec povm = PovmSpec::optimal_for(PhysicalParams{b.omega_m, b.gamma_env, 0.0, 1.0});
    t.rows.resize(etas.size() * ratios.size());
    parallel_for(t.rows.size(), threads, [&](std::size_t i) {
        const double eta = etas[i / ratios.size()];
        const double ratio = ratios[i % ratios.size()];
        const PhysicalParams p{b.omega_m, b.gamma_env, ratio * b.gamma_env, eta};
        validate(p);
        if (eta == 0.0) {
            t.rows[i] = {eta, ratio, p.gamma_fun, Cell{}, Cell{}, Cell{}, false, std::string("no_steady_state")};
            return;
        }
        const auto h = qfi_steady_closed(p);
        Cell fi;
        std::string status = h.divergent ? "divergent" : "ok";
        try {
            fi = povm_fi(p, povm);
        } catch (const DegeneratePovmError&) {
            if (!h.divergent) status = "degenerate_povm";
        }
        Cell r;
        if (!h.divergent && std::holds_alternative<double>(fi)) r = std::get<double>(fi) / h.value;
        t.rows[i] = {eta, ratio, p.gamma_fun, fi, qfi_cell(h), r, h.divergent, status};
    });
    return t;
}

Table figure3(const Config& cfg) {
    const auto b = read_base(cfg, {UnitMode::si, kSiOmega, kSiGammaEnv});
    const auto lambdas = cfg.get_doubles("fig3.lambda_values").value_or(std::vector{1e-10, 1e-8, 1e-6});
    const auto etas = linear_grid(0.0, 1.0, cfg.get_int("fig3.eta_points", 101), "fig3.eta_points");

    Table t;
    t.banner = tool_version() + " | figure 3";
    put_base(t, b);
    t.add_header("fig3.lambda_values", join_numbers(lambdas));
    t.add_header("fig3.eta_points", std::to_string(etas.size()));

    std::vector<double> gammas;
    const auto explicit_gammas = cfg.get_doubles("fig3.gamma_fun_values");
    if (explicit_gammas && cfg.has_section("csl")) {
        throw ConfigError("fig3.gamma_fun_values and a csl block are mutually exclusive");
    }
    if (explicit_gammas) {
        if (explicit_gammas->size() != lambdas.size()) {
            throw ConfigError("fig3.gamma_fun_values must have one entry per fig3.lambda_values entry");
        }
        gammas = *explicit_gammas;
        t.add_header("fig3.gamma_fun_values", join_numbers(gammas));
    } else if (cfg.has_section("csl")) {
        CslParams c;
        c.hbar = default_hbar(b.units);
        c.r_c = cfg.get_double("csl.r_c", c.r_c);
        c.mass = cfg.get_double("csl.mass", c.mass);
        c.alpha = cfg.get_double("csl.alpha", c.alpha);
        c.hbar = cfg.get_double("csl.hbar", c.hbar);
        for (double lambda : lambdas) {
            c.lambda_csl = lambda;
            gammas.push_back(gamma_fun_from_csl(c, b.omega_m));
        }
        t.add_header("csl.r_c", format_number(c.r_c));
        t.add_header("csl.mass", format_number(c.mass));
        t.add_header("csl.alpha", format_number(c.alpha));
        t.add_header("csl.hbar", format_number(c.hbar));
    } else {
        const double ref_lambda = cfg.get_double("fig3.reference_lambda", 1e-8);
        const double m0 = cfg.get_double("fig3.unmonitored_runs", 1e6);
        if (!(ref_lambda > 0.0)) throw ParameterError("fig3.reference_lambda", "must be > 0");
        const double ref_gamma = backed_out_gamma_fun(b.gamma_env, m0);
        for (double lambda : lambdas) gammas.push_back(ref_gamma * lambda / ref_lambda);
        t.add_header("fig3.reference_lambda", format_number(ref_lambda));
        t.add_header("fig3.unmonitored_runs", format_number(m0));
        t.notes.push_back("WARNING: gamma_fun is backed out so that lambda_csl = " + format_number(ref_lambda) +
                          " needs " + format_number(m0) +
                          " runs without monitoring, and scaled linearly in lambda_csl; absolute run counts "
                          "depend on the unstated geometry factor and mass");
    }
    cfg.require_all_used();
    t.notes.push_back("eta = 0 rows use the eta -> 0+ limit H = 1/(4 (gamma_env + gamma_fun)^2)");

    t.columns = {"eta", "lambda_csl", "gamma_fun", "M_runs", "status"};
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        for (double eta : etas) {
            const PhysicalParams p{b.omega_m, b.gamma_env, gammas[j], eta};
            validate(p);
            if (!(p.gamma_fun > 0.0)) {
                t.rows.push_back({eta, lambdas[j], p.gamma_fun, Cell{}, std::string("zero_signal")});
                continue;
            }
            if (eta == 0.0) {
                const auto runs = runs_for_unit_snr(p.gamma_fun, QfiResult::finite(qfi_unmonitored_limit(p)));
                t.rows.push_back({eta, lambdas[j], p.gamma_fun, static_cast<std::int64_t>(runs),
                                  std::string("eta0_limit")});
                continue;
            }
            const auto runs = runs_for_unit_snr(p);
            t.rows.push_back({eta, lambdas[j], p.gamma_fun, static_cast<std::int64_t>(runs), std::string("ok")});
        }
    }
    return t;
}

Table figure4(const Config& cfg, int threads) {
    const auto b = read_base(cfg, {UnitMode::si, kSiOmega, kSiGammaEnv});
    const auto explicit_gamma = cfg.get_double("fig4.gamma_fun");
    const auto ratio = cfg.get_double("fig4.gamma_fun_over_omega");
    if (explicit_gamma && ratio) throw ConfigError("fig4.gamma_fun and fig4.gamma_fun_over_omega are mutually exclusive");
    const double gamma_fun = explicit_gamma ? *explicit_gamma : ratio.value_or(1e-5) * b.omega_m;
    const double n_th = cfg.get_double("fig4.n_th", 100.0);
    const auto etas = cfg.get_doubles("fig4.eta_values").value_or(std::vector{0.5, 1.0});
    const auto times = linear_grid(0.0, cfg.get_double("fig4.t_max", 150e-6), cfg.get_int("fig4.t_points", 301),
                                   "fig4.t_points");
    const double dt = cfg.get_double("fig4.dt", default_time_step(PhysicalParams{b.omega_m, b.gamma_env, 0.0, 1.0}));
    cfg.require_all_used();

    Table t;
    t.banner = tool_version() + " | figure 4";
    put_base(t, b);
    t.add_header("fig4.gamma_fun", format_number(gamma_fun));
    t.add_header("fig4.n_th", format_number(n_th));
    t.add_header("fig4.eta_values", join_numbers(etas));
    t.add_header("fig4.t_max", format_number(times.back()));
    t.add_header("fig4.t_points", std::to_string(times.size()));
    t.add_header("fig4.dt", format_number(dt));
    t.columns = {"t", "eta", "H_t", "H_ss", "ratio", "status"};

    std::vector<std::vector<std::vector<Cell>>> per_eta(etas.size());
    parallel_for(etas.size(), threads, [&](std::size_t j) {
        const PhysicalParams p{b.omega_m, b.gamma_env, gamma_fun, etas[j]};
        validate(p);
        const auto series = qfi_finite_time_series(p, n_th, times, dt);
        std::optional<QfiResult> h_ss;
        if (p.eta > 0.0) h_ss = qfi_steady_closed(p);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto& h = series[k];
            Cell ss = h_ss ? qfi_cell(*h_ss) : Cell{};
            Cell r;
            std::string status = "ok";
            if (h.divergent) {
                status = "divergent";
            } else if (!h_ss) {
                status = "no_steady_state";
            } else if (h_ss->divergent) {
                status = "steady_divergent";
            } else {
                r = h.value / h_ss->value;
            }
            per_eta[j].push_back({times[k], etas[j], qfi_cell(h), ss, r, status});
        }
    });
    for (auto& block : per_eta) {
        for (auto& row : block) t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

Table figure_table(int figure, const Config& cfg, int threads) {
    switch (figure) {
        case 1: return figure1(cfg);
        case 2: return figure2(cfg, threads);
        case 3: return figure3(cfg);
        case 4: return figure4(cfg, threads);
        default: throw ConfigError("unknown figure " + std::to_string(figure) + " (expected 1-4)");
    }
}

}  // namespace fundiff::cli
