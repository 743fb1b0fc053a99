#include <cmath>
#include <set>
#include <string>

#include "fundiff/cli.hpp"
#include "fundiff/dynamics.hpp"
#include "fundiff/errors.hpp"
#include "fundiff/estimation.hpp"

namespace fundiff::cli {

namespace {

const std::set<std::string> kPhysicalAxes = {"omega_m", "gamma_env", "gamma_fun", "eta"};
const std::set<std::string> kCslAxes = {"csl.lambda_csl", "csl.r_c", "csl.mass", "csl.alpha"};

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    long long points = 0;
    bool log = false;
    std::vector<double> values;
};

Axis read_axis(const Config& cfg, const std::string& name) {
    if (!kPhysicalAxes.count(name) && !kCslAxes.count(name)) {
        throw ConfigError("sweep: \"" + name + "\" is not a PhysicalParams or CslParams field");
    }
    Axis a;
    a.name = name;
    const std::string prefix = "sweep." + name + ".";
    auto lo = cfg.get_double(prefix + "min");
    auto hi = cfg.get_double(prefix + "max");
    if (!lo || !hi) throw ConfigError("sweep: axis " + name + " needs " + prefix + "min and " + prefix + "max");
    a.min = *lo;
    a.max = *hi;
    a.points = cfg.get_int(prefix + "points", 11);
    const auto spacing = cfg.get_string(prefix + "spacing", "linear");
    if (spacing == "log") {
        a.log = true;
    } else if (spacing != "linear") {
        throw ConfigError(prefix + "spacing: expected linear or log");
    }
    if (a.points < 2) throw ConfigError(prefix + "points: point count must be >= 2");
    if (a.log && !(a.min > 0.0 && a.max > 0.0)) throw ConfigError(prefix + "min/max must be > 0 for log spacing");
    for (long long i = 0; i < a.points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(a.points - 1);
        a.values.push_back(a.log ? std::exp(std::log(a.min) + f * (std::log(a.max) - std::log(a.min)))
                                 : a.min + f * (a.max - a.min));
    }
    a.values.front() = a.min;
    a.values.back() = a.max;
    return a;
}

}  // namespace

Table sweep_table(const Config& cfg, int threads) {
    const auto names = cfg.get_strings("sweep.axes");
    if (!names || names->empty()) throw ConfigError("sweep: sweep.axes is required");
    std::vector<Axis> axes;
    std::set<std::string> seen;
    bool csl_axis = false;
    for (const auto& n : *names) {
        if (!seen.insert(n).second) throw ConfigError("sweep: duplicate axis " + n);
        axes.push_back(read_axis(cfg, n));
        csl_axis = csl_axis || kCslAxes.count(n);
    }
    if (csl_axis && seen.count("gamma_fun")) throw ConfigError("sweep: gamma_fun and csl axes are mutually exclusive");

    RunParams defaults{UnitMode::natural, PhysicalParams{1.0, 0.1, 0.01, 1.0}, {}};
    if (csl_axis) {
        defaults.csl = CslParams{};
        if (cfg.get_string("units", "natural") == "natural") defaults.csl->hbar = 1.0;
    }
    const auto base = read_run_params(cfg, defaults);
    if (csl_axis && !base.csl) throw ConfigError("sweep: csl axes cannot be combined with an explicit gamma_fun");
    const auto m_runs = cfg.get_int("sweep.m_runs", 1);
    if (m_runs < 1) throw ParameterError("sweep.m_runs", "must be >= 1");
    const bool with_povm = cfg.get_bool("sweep.povm", true);
    cfg.require_all_used();

    Table t;
    t.banner = tool_version() + " | sweep";
    t.add_header("units", std::string(to_string(base.units)));
    t.add_header("omega_m", format_number(base.physical.omega_m));
    t.add_header("gamma_env", format_number(base.physical.gamma_env));
    t.add_header("eta", format_number(base.physical.eta));
    if (base.csl) {
        t.add_header("csl.lambda_csl", format_number(base.csl->lambda_csl));
        t.add_header("csl.r_c", format_number(base.csl->r_c));
        t.add_header("csl.mass", format_number(base.csl->mass));
        t.add_header("csl.alpha", format_number(base.csl->alpha));
        t.add_header("csl.hbar", format_number(base.csl->hbar));
    } else {
        t.add_header("gamma_fun", format_number(base.physical.gamma_fun));
    }
    std::string axis_list;
    for (const auto& a : axes) axis_list += (axis_list.empty() ? "" : ", ") + a.name;
    t.add_header("sweep.axes", axis_list);
    for (const auto& a : axes) {
        const std::string prefix = "sweep." + a.name + ".";
        t.add_header(prefix + "min", format_number(a.min));
        t.add_header(prefix + "max", format_number(a.max));
        t.add_header(prefix + "points", std::to_string(a.points));
        t.add_header(prefix + "spacing", a.log ? "log" : "linear");
    }
    t.add_header("sweep.m_runs", std::to_string(m_runs));
    t.add_header("sweep.povm", with_povm ? "true" : "false");

    for (const auto& a : axes) t.columns.push_back(a.name);
    if (!seen.count("gamma_fun")) t.columns.push_back("gamma_fun");
    for (const char* c : {"sigma_xx", "sigma_xp", "sigma_pp", "purity", "H_ss", "FI_povm", "snr", "runs_unit_snr",
                          "divergent", "status"}) {
        t.columns.push_back(c);
    }

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();
    t.rows.resize(total);
    parallel_for(total, threads, [&](std::size_t index) {
        PhysicalParams p = base.physical;
        std::optional<CslParams> csl = base.csl;
        std::vector<Cell> row;
        std::size_t rest = index;
        std::vector<std::size_t> idx(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            idx[k] = rest % axes[k].values.size();
            rest /= axes[k].values.size();
        }
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const double v = axes[k].values[idx[k]];
            const auto& n = axes[k].name;
            if (n == "omega_m") p.omega_m = v;
            else if (n == "gamma_env") p.gamma_env = v;
            else if (n == "gamma_fun") p.gamma_fun = v;
            else if (n == "eta") p.eta = v;
            else if (n == "csl.lambda_csl") csl->lambda_csl = v;
            else if (n == "csl.r_c") csl->r_c = v;
            else if (n == "csl.mass") csl->mass = v;
            else if (n == "csl.alpha") csl->alpha = v;
            row.emplace_back(v);
        }
        if (csl) p.gamma_fun = gamma_fun_from_csl(*csl, p.omega_m);
        validate(p);
        if (!seen.count("gamma_fun")) row.emplace_back(p.gamma_fun);

        if (p.eta == 0.0) {
            for (int k = 0; k < 8; ++k) row.emplace_back();
            row.emplace_back(false);
            row.emplace_back(std::string("no_steady_state"));
            t.rows[index] = std::move(row);
            return;
        }
        const CovMat s = steady_state_analytic(p);
        const auto h = qfi_steady_closed(p);
        std::string status = h.divergent ? "divergent" : "ok";
        row.emplace_back(s.xx);
        row.emplace_back(s.xp);
        row.emplace_back(s.pp);
        row.emplace_back(purity(s));
        row.emplace_back(h.divergent ? Cell{} : Cell{h.value});
        Cell fi;
        if (with_povm) {
            try {
                fi = povm_fi(p, PovmSpec::optimal_for(p));
            } catch (const DegeneratePovmError&) {
                if (!h.divergent) status = "degenerate_povm";
            }
        }
        row.push_back(fi);
        if (p.gamma_fun == 0.0) {
            row.emplace_back(0.0);
            row.emplace_back();
        } else {
            row.emplace_back(snr_bound(p, static_cast<std::uint64_t>(m_runs)));
            row.emplace_back(static_cast<std::int64_t>(runs_for_unit_snr(p)));
        }
        row.emplace_back(h.divergent);
        row.emplace_back(status);
        t.rows[index] = std::move(row);
    });
    return t;
}

}  // namespace fundiff::cli
