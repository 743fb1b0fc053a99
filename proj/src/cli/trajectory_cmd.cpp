#include <algorithm>
#include <cmath>
#include <numbers>

#include "fundiff/cli.hpp"
#include "fundiff/dynamics.hpp"
#include "fundiff/errors.hpp"
#include "fundiff/trajectory.hpp"

namespace fundiff::cli {

TrajectoryTables trajectory_tables(const Config& cfg, std::optional<std::uint64_t> seed, int threads) {
    constexpr double kOmega = 2.0 * std::numbers::pi * 135e3;
    const RunParams defaults{UnitMode::si,
                             PhysicalParams{kOmega, 2.0 * std::numbers::pi * 11e3, 1e-5 * kOmega, 1.0}, {}};
    const auto rp = read_run_params(cfg, defaults);
    const auto& p = rp.physical;

    TrajectoryConfig tc;
    tc.dt = cfg.get_double("trajectory.dt", default_time_step(p));
    tc.n_steps = cfg.get_int("trajectory.n_steps", 2700);
    tc.n_traj = cfg.get_int("trajectory.n_traj", 10000);
    const auto cfg_seed = cfg.get_int("trajectory.seed", 0);
    if (cfg_seed < 0) throw ParameterError("trajectory.seed", "must be >= 0");
    tc.seed = seed.value_or(static_cast<std::uint64_t>(cfg_seed));
    tc.feedback = cfg.get_bool("trajectory.feedback", false);
    tc.record_output = cfg.get_bool("trajectory.record_output", false);
    tc.stride = cfg.get_int("trajectory.stride", std::max<long long>(1, tc.n_steps / 5));
    tc.threads = threads;
    const double n_th = cfg.get_double("trajectory.n_th", 100.0);
    if (!(n_th >= 0.0)) throw ParameterError("trajectory.n_th", "must be >= 0");
    GaussianState state0;
    state0.cov = CovMat::identity(2.0 * n_th + 1.0);
    state0.mean = {cfg.get_double("trajectory.x0", 0.0), cfg.get_double("trajectory.p0", 0.0)};
    cfg.require_all_used();

    const auto result = simulate(p, state0, tc);
    const auto checks = total_variance_check(result, p, state0);

    Table header;
    header.add_header("units", std::string(to_string(rp.units)));
    header.add_header("omega_m", format_number(p.omega_m));
    header.add_header("gamma_env", format_number(p.gamma_env));
    if (rp.csl) {
        header.add_header("csl.lambda_csl", format_number(rp.csl->lambda_csl));
        header.add_header("csl.r_c", format_number(rp.csl->r_c));
        header.add_header("csl.mass", format_number(rp.csl->mass));
        header.add_header("csl.alpha", format_number(rp.csl->alpha));
        header.add_header("csl.hbar", format_number(rp.csl->hbar));
    } else {
        header.add_header("gamma_fun", format_number(p.gamma_fun));
    }
    header.add_header("eta", format_number(p.eta));
    header.add_header("trajectory.dt", format_number(result.dt));
    header.add_header("trajectory.n_steps", std::to_string(tc.n_steps));
    header.add_header("trajectory.n_traj", std::to_string(tc.n_traj));
    header.add_header("trajectory.seed", std::to_string(tc.seed));
    header.add_header("trajectory.feedback", tc.feedback ? "true" : "false");
    header.add_header("trajectory.record_output", tc.record_output ? "true" : "false");
    header.add_header("trajectory.stride", std::to_string(tc.stride));
    header.add_header("trajectory.n_th", format_number(n_th));
    header.add_header("trajectory.x0", format_number(state0.mean(0)));
    header.add_header("trajectory.p0", format_number(state0.mean(1)));

    TrajectoryTables out;
    out.max_mean_norm = result.max_mean_norm;
    out.dump = header;
    out.dump.banner = tool_version() + " | trajectory";
    out.dump.columns = {"traj_id", "step", "t", "x_mean", "p_mean"};
    if (tc.record_output) {
        out.dump.columns.emplace_back("dy1");
        out.dump.columns.emplace_back("dy2");
    }
    for (std::int64_t traj = 0; traj < result.n_traj; ++traj) {
        for (std::size_t k = 0; k < result.n_stored(); ++k) {
            const auto& m = result.mean(traj, k);
            std::vector<Cell> row{traj, result.steps[k], result.time(k), m(0), m(1)};
            if (tc.record_output) {
                const auto& dy = result.record[static_cast<std::size_t>(traj) * result.n_stored() + k];
                row.emplace_back(dy(0));
                row.emplace_back(dy(1));
            }
            out.dump.rows.push_back(std::move(row));
        }
    }

    out.summary = header;
    out.summary.banner = tool_version() + " | trajectory summary";
    out.summary.columns = {"step",     "t",        "sigma_xx", "sigma_xp", "sigma_pp", "total_xx", "total_xp",
                           "total_pp", "uncond_xx", "uncond_xp", "uncond_pp", "z_xx",    "z_xp",     "z_pp",
                           "mean_x",   "mean_p",   "mean_se_x", "mean_se_p"};
    for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto& c = checks[k];
        const auto mom = ensemble_moments(result, k);
        const auto& s = result.cov_path[static_cast<std::size_t>(result.steps[k])];
        out.max_abs_z = std::max({out.max_abs_z, std::abs(c.z.xx), std::abs(c.z.xp), std::abs(c.z.pp)});
        out.summary.rows.push_back({result.steps[k], c.t, s.xx, s.xp, s.pp, c.conditional_total.xx,
                                    c.conditional_total.xp, c.conditional_total.pp, c.unconditional.xx,
                                    c.unconditional.xp, c.unconditional.pp, c.z.xx, c.z.xp, c.z.pp, mom.mean(0),
                                    mom.mean(1), mom.mean_se(0), mom.mean_se(1)});
    }
    out.summary.notes.push_back("total = sigma + 2 E[<r><r>^T]; z = (total - uncond) / (2 standard errors)");
    out.summary.notes.push_back("max_mean_norm = " + format_number(out.max_mean_norm));
    out.summary.notes.push_back("max_abs_z = " + format_number(out.max_abs_z));
    return out;
}

}  // namespace fundiff::cli
