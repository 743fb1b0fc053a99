#include "fundiff/params.hpp"

#include <cmath>
#include <string>

#include "fundiff/errors.hpp"

namespace fundiff {

std::string_view to_string(UnitMode mode) {
    return mode == UnitMode::si ? "si" : "natural";
}

UnitMode unit_mode_from_string(std::string_view text) {
    if (text == "natural") return UnitMode::natural;
    if (text == "si") return UnitMode::si;
    throw ParameterError("units", "expected \"natural\" or \"si\", got \"" + std::string(text) + "\"");
}

namespace {

void require(bool ok, const char* field, const char* condition, double value) {
    if (!ok) {
        throw ParameterError(field, std::string("must satisfy ") + condition + " (got " +
                                        std::to_string(value) + ")");
    }
}

}  // namespace

void validate(const PhysicalParams& p) {
    require(std::isfinite(p.omega_m) && p.omega_m > 0, "omega_m", "omega_m > 0", p.omega_m);
    require(std::isfinite(p.gamma_env) && p.gamma_env > 0, "gamma_env", "gamma_env > 0", p.gamma_env);
    require(std::isfinite(p.gamma_fun) && p.gamma_fun >= 0, "gamma_fun", "gamma_fun >= 0", p.gamma_fun);
    require(p.eta >= 0 && p.eta <= 1, "eta", "0 <= eta <= 1", p.eta);
}

void validate(const CslParams& c) {
    require(std::isfinite(c.lambda_csl) && c.lambda_csl >= 0, "csl.lambda_csl", "lambda_csl >= 0",
            c.lambda_csl);
    require(std::isfinite(c.r_c) && c.r_c > 0, "csl.r_c", "r_c > 0", c.r_c);
    require(std::isfinite(c.mass) && c.mass > 0, "csl.mass", "mass > 0", c.mass);
    require(std::isfinite(c.alpha) && c.alpha > 0, "csl.alpha", "alpha > 0", c.alpha);
    require(std::isfinite(c.hbar) && c.hbar > 0, "csl.hbar", "hbar > 0", c.hbar);
}

double beta_from_csl(const CslParams& csl) {
    validate(csl);
    return csl.alpha * csl.hbar * csl.lambda_csl / (csl.mass * csl.r_c * csl.r_c);
}

double gamma_fun_from_csl(const CslParams& csl, double omega_m) {
    require(std::isfinite(omega_m) && omega_m > 0, "omega_m", "omega_m > 0", omega_m);
    return beta_from_csl(csl) / omega_m;
}

}  // namespace fundiff
