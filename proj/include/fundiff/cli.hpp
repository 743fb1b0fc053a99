#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fundiff/config.hpp"
#include "fundiff/table.hpp"

namespace fundiff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDomain = 2;

/// Runs `fundiff <args...>` (args exclude the program name). `environment`
/// holds NAME=VALUE entries consulted for FUNDIFF_* overrides.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::vector<std::string>& environment = {});

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

Table steady_table(const Config& cfg);
Table figure_table(int figure, const Config& cfg, int threads);
Table sweep_table(const Config& cfg, int threads);

struct TrajectoryTables {
    Table dump;
    Table summary;
    double max_mean_norm = 0.0;
    double max_abs_z = 0.0;
};

TrajectoryTables trajectory_tables(const Config& cfg, std::optional<std::uint64_t> seed, int threads);

/// Gamma_fun giving an eta -> 0+ unit-SNR run count of `unmonitored_runs`:
/// solves 4 (G_env + G_fun)^2 / G_fun^2 = M0.
double backed_out_gamma_fun(double gamma_env, double unmonitored_runs);

std::string tool_version();

}  // namespace fundiff::cli
