#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fundiff/params.hpp"

namespace fundiff {

/// Plain-text key/value configuration.
///
///     # comment
///     units = "natural"          # or "si"
///     omega_m = 1
///     gamma_env = 0.1
///     [csl]                      # keys below become csl.<key>
///     lambda_csl = 1e-8
///
/// Dotted keys (`csl.r_c = 1e-7`) are equivalent to sections. Numeric values
/// may be products of literals and `pi` (`2*pi*135e3`). Lists are
/// comma-separated. Environment variables `FUNDIFF_<KEY>` override file
/// entries; `__` in the variable name maps to `.` (`FUNDIFF_CSL__R_C`).
class Config {
public:
    static Config parse(std::string_view text, std::string_view origin = "<string>");
    static Config load(const std::filesystem::path& path);

    /// Applies `NAME=VALUE` entries carrying the override prefix.
    void apply_env_overrides(const std::vector<std::string>& environment,
                             std::string_view prefix = "FUNDIFF_");

    void set(const std::string& key, std::string value);
    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] bool has_section(const std::string& section) const;

    [[nodiscard]] std::optional<std::string> get_string(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key, std::string fallback) const;
    [[nodiscard]] std::optional<double> get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] long long get_int(const std::string& key, long long fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::optional<std::vector<double>> get_doubles(const std::string& key) const;
    [[nodiscard]] std::optional<std::vector<std::string>> get_strings(const std::string& key) const;

    /// Keys that were never read. Reading marks keys as consumed.
    [[nodiscard]] std::vector<std::string> unused_keys() const;
    /// Throws ConfigError listing unread keys (typo guard).
    void require_all_used() const;

    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    mutable std::set<std::string> used_;
};

/// Parses a scalar: decimal literal, `pi`, or a `*`-product of those.
double parse_number(std::string_view text);

/// Model parameters resolved from a configuration.
struct RunParams {
    UnitMode units = UnitMode::natural;
    PhysicalParams physical;
    std::optional<CslParams> csl;
};

/// Reads `units`, `omega_m`, `gamma_env`, `gamma_fun`, `eta` and the optional
/// `csl.*` block. When the CSL block is given, gamma_fun is derived from it
/// and an explicit gamma_fun is rejected. Missing keys take `defaults`.
RunParams read_run_params(const Config& cfg, const RunParams& defaults = {});

/// Canonical number formatting: shortest round-trip representation.
std::string format_number(double value);

}  // namespace fundiff
