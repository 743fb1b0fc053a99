#include "fundiff/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fundiff/errors.hpp"

namespace fundiff {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') return false;
    return std::all_of(key.begin(), key.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (!quoted && line[i] == '#') return line.substr(0, i);
    }
    return line;
}

std::string unquote(std::string_view value, std::string_view where) {
    if (!value.empty() && value.front() == '"') {
        if (value.size() < 2 || value.back() != '"') {
            throw ConfigError(std::string(where) + ": unterminated string");
        }
        return std::string(value.substr(1, value.size() - 2));
    }
    return std::string(value);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

double parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ConfigError("empty numeric value");
    double product = 1.0;
    for (auto factor : split(text, '*')) {
        if (factor == "pi") {
            product *= std::numbers::pi;
            continue;
        }
        double v = 0.0;
        const auto* first = factor.data();
        const auto* last = factor.data() + factor.size();
        if (!factor.empty() && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || factor.empty()) {
            throw ConfigError("not a number: \"" + std::string(text) + "\"");
        }
        product *= v;
    }
    return product;
}

Config Config::parse(std::string_view text, std::string_view origin) {
    Config cfg;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            auto name = trim(line.substr(1, line.size() - 2));
            if (!name.empty() && !valid_key(name)) {
                throw ConfigError(where + ": invalid section name \"" + std::string(name) + "\"");
            }
            section = std::string(name);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError(where + ": invalid key \"" + std::string(key) + "\"");
        if (value.empty()) throw ConfigError(where + ": missing value for \"" + std::string(key) + "\"");
        std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (cfg.entries_.count(full)) throw ConfigError(where + ": duplicate key \"" + full + "\"");
        cfg.entries_[full] = unquote(value, where);
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

void Config::apply_env_overrides(const std::vector<std::string>& environment, std::string_view prefix) {
    for (const auto& entry : environment) {
        if (entry.rfind(prefix, 0) != 0) continue;
        auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string name = entry.substr(prefix.size(), eq - prefix.size());
        std::string key;
        for (std::size_t i = 0; i < name.size(); ++i) {
            if (name[i] == '_' && i + 1 < name.size() && name[i + 1] == '_') {
                key += '.';
                ++i;
            } else {
                key += static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
            }
        }
        if (!valid_key(key)) throw ConfigError("invalid override variable " + entry.substr(0, eq));
        entries_[key] = unquote(trim(std::string_view(entry).substr(eq + 1)), entry.substr(0, eq));
    }
}

void Config::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

bool Config::has_section(const std::string& section) const {
    const std::string prefix = section + ".";
    auto it = entries_.lower_bound(prefix);
    return it != entries_.end() && it->first.rfind(prefix, 0) == 0;
}

std::optional<std::string> Config::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
}

std::string Config::get_string(const std::string& key, std::string fallback) const {
    return get_string(key).value_or(std::move(fallback));
}

std::optional<double> Config::get_double(const std::string& key) const {
    auto s = get_string(key);
    if (!s) return std::nullopt;
    try {
        return parse_number(*s);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return get_double(key).value_or(fallback);
}

long long Config::get_int(const std::string& key, long long fallback) const {
    auto v = get_double(key);
    if (!v) return fallback;
    if (std::floor(*v) != *v || std::abs(*v) > 9.0e15) {
        throw ConfigError(key + ": expected an integer");
    }
    return static_cast<long long>(*v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto s = get_string(key);
    if (!s) return fallback;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    throw ConfigError(key + ": expected true or false, got \"" + *s + "\"");
}

std::optional<std::vector<double>> Config::get_doubles(const std::string& key) const {
    auto parts = get_strings(key);
    if (!parts) return std::nullopt;
    std::vector<double> out;
    for (const auto& p : *parts) {
        try {
            out.push_back(parse_number(p));
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    return out;
}

std::optional<std::vector<std::string>> Config::get_strings(const std::string& key) const {
    auto s = get_string(key);
    if (!s) return std::nullopt;
    std::vector<std::string> out;
    for (auto part : split(*s, ',')) {
        if (part.empty()) throw ConfigError(key + ": empty list element");
        out.emplace_back(part);
    }
    return out;
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
        if (!used_.count(k)) out.push_back(k);
    }
    return out;
}

void Config::require_all_used() const {
    auto unused = unused_keys();
    if (unused.empty()) return;
    std::string msg = "unknown configuration keys:";
    for (const auto& k : unused) msg += " " + k;
    throw ConfigError(msg);
}

RunParams read_run_params(const Config& cfg, const RunParams& defaults) {
    RunParams out = defaults;
    if (auto u = cfg.get_string("units")) out.units = unit_mode_from_string(*u);
    auto& p = out.physical;
    p.omega_m = cfg.get_double("omega_m", p.omega_m);
    p.gamma_env = cfg.get_double("gamma_env", p.gamma_env);
    p.eta = cfg.get_double("eta", p.eta);
    auto explicit_fun = cfg.get_double("gamma_fun");
    if (cfg.has_section("csl")) {
        if (explicit_fun) {
            throw ConfigError("gamma_fun and a csl block are mutually exclusive");
        }
        CslParams c = out.csl.value_or(CslParams{});
        if (!out.csl) c.hbar = default_hbar(out.units);
        c.lambda_csl = cfg.get_double("csl.lambda_csl", c.lambda_csl);
        c.r_c = cfg.get_double("csl.r_c", c.r_c);
        c.mass = cfg.get_double("csl.mass", c.mass);
        c.alpha = cfg.get_double("csl.alpha", c.alpha);
        c.hbar = cfg.get_double("csl.hbar", c.hbar);
        validate(c);
        out.csl = c;
        p.gamma_fun = gamma_fun_from_csl(c, p.omega_m);
    } else if (explicit_fun) {
        p.gamma_fun = *explicit_fun;
        out.csl.reset();
    }
    validate(p);
    return out;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

}  // namespace fundiff
