#pragma once

#include <optional>
#include <string_view>

namespace fundiff {

/// Unit convention of a run. In `natural` mode omega_m sets the scale and
/// hbar = 1; in `si` mode rates are in rad/s and hbar is in J s.
enum class UnitMode { natural, si };

std::string_view to_string(UnitMode mode);
UnitMode unit_mode_from_string(std::string_view text);

inline constexpr double kHbarSI = 1.0545718e-34;

[[nodiscard]] constexpr double default_hbar(UnitMode mode) {
    return mode == UnitMode::si ? kHbarSI : 1.0;
}

/// The four rates of the monitored oscillator. All rates share one unit.
struct PhysicalParams {
    double omega_m = 1.0;    ///< mechanical angular frequency
    double gamma_env = 0.1;  ///< environmental momentum diffusion
    double gamma_fun = 0.0;  ///< fundamental (collapse) momentum diffusion
    double eta = 1.0;        ///< monitoring efficiency, 0..1

    [[nodiscard]] double gamma_total() const { return gamma_env + gamma_fun; }

    /// Same parameters with a different value of one field.
    [[nodiscard]] PhysicalParams with_eta(double v) const {
        auto p = *this;
        p.eta = v;
        return p;
    }
    [[nodiscard]] PhysicalParams with_gamma_fun(double v) const {
        auto p = *this;
        p.gamma_fun = v;
        return p;
    }

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// CSL model inputs.
struct CslParams {
    double lambda_csl = 1e-8;  ///< collapse rate [1/s]
    double r_c = 1e-7;         ///< localization length [m]
    double mass = 1e-18;       ///< object mass [kg]
    double alpha = 1.0;        ///< geometry factor
    double hbar = kHbarSI;     ///< [J s]

    friend bool operator==(const CslParams&, const CslParams&) = default;
};

/// Throws ParameterError naming the first offending field.
void validate(const PhysicalParams& p);
void validate(const CslParams& c);

/// beta = alpha hbar lambda / (m r_c^2).
[[nodiscard]] double beta_from_csl(const CslParams& csl);

/// Gamma_fun = beta / omega_m.
[[nodiscard]] double gamma_fun_from_csl(const CslParams& csl, double omega_m);

}  // namespace fundiff
