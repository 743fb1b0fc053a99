#include <gtest/gtest.h>

#include <numbers>

#include "fundiff/config.hpp"
#include "fundiff/errors.hpp"

namespace fundiff {
namespace {

TEST(Config, SectionsAndDottedKeysAreEquivalent) {
    const auto a = Config::parse("[csl]\nlambda_csl = 1e-8\nr_c = 1e-7\n");
    const auto b = Config::parse("csl.lambda_csl = 1e-8\ncsl.r_c = 1e-7\n");
    EXPECT_EQ(a.entries(), b.entries());
    EXPECT_TRUE(a.has_section("csl"));
    EXPECT_FALSE(a.has_section("cs"));
}

TEST(Config, CommentsQuotesAndProducts) {
    const auto cfg = Config::parse(R"(
# full line comment
units = "si"            # trailing comment
omega_m = 2*pi*135e3
label = "a # not a comment"
)");
    EXPECT_EQ(cfg.get_string("units", ""), "si");
    EXPECT_DOUBLE_EQ(*cfg.get_double("omega_m"), 2 * std::numbers::pi * 135e3);
    EXPECT_EQ(cfg.get_string("label", ""), "a # not a comment");
}

TEST(Config, Lists) {
    const auto cfg = Config::parse("values = 0.01, 0.025,0.05\n");
    EXPECT_EQ(*cfg.get_doubles("values"), (std::vector<double>{0.01, 0.025, 0.05}));
    EXPECT_THROW((void)Config::parse("v = 1,,2\n").get_doubles("v"), ConfigError);
}

TEST(Config, MalformedInputReportsLine) {
    try {
        (void)Config::parse("omega_m = 1\nthis line is wrong\n", "cfg.txt");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg.txt:2"), std::string::npos);
    }
    EXPECT_THROW((void)Config::parse("[csl\n"), ConfigError);
    EXPECT_THROW((void)Config::parse("a = 1\na = 2\n"), ConfigError);
    EXPECT_THROW((void)Config::parse("a b = 1\n"), ConfigError);
    EXPECT_THROW((void)Config::parse("a =\n"), ConfigError);
    EXPECT_THROW((void)Config::parse("a = \"open\n"), ConfigError);
    EXPECT_THROW((void)Config::parse("x = abc\n").get_double("x"), ConfigError);
}

TEST(Config, EnvironmentOverrides) {
    auto cfg = Config::parse("eta = 0.5\n");
    cfg.apply_env_overrides({"FUNDIFF_ETA=0.25", "FUNDIFF_CSL__R_C=2e-7", "PATH=/bin", "OTHER_ETA=9"});
    EXPECT_DOUBLE_EQ(*cfg.get_double("eta"), 0.25);
    EXPECT_DOUBLE_EQ(*cfg.get_double("csl.r_c"), 2e-7);
    EXPECT_FALSE(cfg.has("path"));
}

TEST(Config, UnusedKeysAreReported) {
    const auto cfg = Config::parse("eta = 0.5\netaa = 0.2\n");
    (void)cfg.get_double("eta");
    EXPECT_EQ(cfg.unused_keys(), std::vector<std::string>{"etaa"});
    EXPECT_THROW(cfg.require_all_used(), ConfigError);
}

TEST(RunParams, DefaultsAndOverrides) {
    const auto rp = read_run_params(Config::parse("eta = 0.3\ngamma_fun = 0.02\n"));
    EXPECT_EQ(rp.units, UnitMode::natural);
    EXPECT_EQ(rp.physical.eta, 0.3);
    EXPECT_EQ(rp.physical.gamma_fun, 0.02);
    EXPECT_FALSE(rp.csl);
}

TEST(RunParams, CslBlockDerivesGammaFun) {
    const auto rp = read_run_params(Config::parse(R"(
units = si
omega_m = 1e6
[csl]
lambda_csl = 1e-8
r_c = 1e-7
mass = 1e-18
)"));
    ASSERT_TRUE(rp.csl);
    EXPECT_EQ(rp.csl->hbar, kHbarSI);
    EXPECT_NEAR(rp.physical.gamma_fun, kHbarSI * 1e-8 / (1e-18 * 1e-14 * 1e6), 1e-30);
}

TEST(RunParams, RejectsConflictsAndInvalidValues) {
    EXPECT_THROW((void)read_run_params(Config::parse("gamma_fun = 0.1\ncsl.r_c = 1e-7\n")), ConfigError);
    EXPECT_THROW((void)read_run_params(Config::parse("eta = 1.5\n")), ParameterError);
    EXPECT_THROW((void)read_run_params(Config::parse("units = metric\n")), ParameterError);
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e-5), "1e-05");
    for (double v : {0.1 + 0.2, std::numbers::pi * 1e7, 1.0 / 3.0}) {
        EXPECT_EQ(parse_number(format_number(v)), v);
    }
}

}  // namespace
}  // namespace fundiff
