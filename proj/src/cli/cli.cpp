#include "fundiff/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "fundiff/errors.hpp"

namespace fundiff::cli {

namespace {

struct Common {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key/value configuration file");
    cmd->add_option("--out", c.out_path, "output file (stdout when omitted)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
}

Config load_config(const Common& c, const std::vector<std::string>& environment) {
    Config cfg = c.config_path.empty() ? Config{} : Config::load(c.config_path);
    cfg.apply_env_overrides(environment);
    return cfg;
}

void write_output(const std::string& path, const Table& table, OutputFormat format, std::ostream& out) {
    if (path.empty()) {
        write_table(out, table, format);
        return;
    }
    std::ostringstream buf;
    write_table(buf, table, format);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file " + path);
    file << buf.str();
    if (!file) throw ConfigError("failed writing output file " + path);
}

std::string summary_path(const std::string& out) {
    std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + ".summary" + p.extension().string())).string();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::vector<std::string>& environment) {
    CLI::App app{"Fisher information and measurement budgets for collapse-induced momentum diffusion"};
    app.name("fundiff");
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    Common steady_opts, figure_opts, sweep_opts, traj_opts;
    int figure_number = 0;
    std::optional<std::uint64_t> seed;

    auto* steady = app.add_subcommand("steady", "steady-state covariance, purity and QFI");
    add_common(steady, steady_opts);
    auto* figure = app.add_subcommand("figure", "data for figures 1-4");
    figure->add_option("n", figure_number, "figure number")->required()->check(CLI::Range(1, 4));
    add_common(figure, figure_opts);
    auto* sweep = app.add_subcommand("sweep", "grid sweep over model parameters");
    add_common(sweep, sweep_opts);
    auto* traj = app.add_subcommand("trajectory", "monitored trajectory ensemble");
    add_common(traj, traj_opts);
    traj->add_option("--seed", seed, "random seed (overrides trajectory.seed)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (steady->parsed()) {
            const auto table = steady_table(load_config(steady_opts, environment));
            write_output(steady_opts.out_path, table, output_format_from_string(steady_opts.format), out);
            // The report always reaches the terminal.
            if (!steady_opts.out_path.empty()) write_table(out, table, OutputFormat::csv);
        } else if (figure->parsed()) {
            const auto table = figure_table(figure_number, load_config(figure_opts, environment), figure_opts.threads);
            write_output(figure_opts.out_path, table, output_format_from_string(figure_opts.format), out);
        } else if (sweep->parsed()) {
            const auto table = sweep_table(load_config(sweep_opts, environment), sweep_opts.threads);
            write_output(sweep_opts.out_path, table, output_format_from_string(sweep_opts.format), out);
        } else if (traj->parsed()) {
            if (traj_opts.out_path.empty()) throw ConfigError("trajectory: --out is required");
            const auto tables = trajectory_tables(load_config(traj_opts, environment), seed, traj_opts.threads);
            const auto format = output_format_from_string(traj_opts.format);
            write_output(traj_opts.out_path, tables.dump, format, out);
            write_output(summary_path(traj_opts.out_path), tables.summary, format, out);
            out << "max_mean_norm = " << format_number(tables.max_mean_norm) << "\n"
                << "max_abs_z = " << format_number(tables.max_abs_z) << "\n";
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace fundiff::cli
