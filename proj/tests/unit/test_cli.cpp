#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fundiff/cli.hpp"

namespace fundiff::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args, std::vector<std::string> env = {}) {
    std::ostringstream out, err;
    const int code = run(args, out, err, env);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fundiff_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    fs::path dir_;
};

TEST_F(CliTest, UnmonitoredSteadyIsDomainErrorWithoutOutput) {
    const auto cfg = write("c.cfg", "eta = 0\n");
    const auto r = invoke({"steady", "--config", cfg, "--out", path("s.csv")});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_FALSE(fs::exists(path("s.csv")));
    EXPECT_NE(r.err.find("eta"), std::string::npos);
}

TEST_F(CliTest, MalformedConfigIsConfigError) {
    EXPECT_EQ(invoke({"steady", "--config", write("a.cfg", "omega_m 1\n")}).code, kExitConfig);
    EXPECT_EQ(invoke({"steady", "--config", write("b.cfg", "omgea_m = 1\n")}).code, kExitConfig);
    EXPECT_EQ(invoke({"steady", "--config", write("c.cfg", "eta = 1.5\n")}).code, kExitConfig);
    EXPECT_EQ(invoke({"steady", "--config", path("missing.cfg")}).code, kExitConfig);
    EXPECT_EQ(invoke({"figure", "7"}).code, kExitConfig);
    EXPECT_EQ(invoke({"bogus"}).code, kExitConfig);
    EXPECT_EQ(invoke({"trajectory"}).code, kExitConfig);
}

TEST_F(CliTest, SteadyReportsPerfectMonitoringPureState) {
    const auto r = invoke({"steady"});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("sigma_xx,sigma_xp,sigma_pp,det,purity"), std::string::npos);
    // Divergent QFI is left empty, never printed as inf.
    EXPECT_NE(r.out.find(",true,true,,true"), std::string::npos);
    EXPECT_EQ(r.out.find("inf"), std::string::npos);
}

TEST_F(CliTest, EnvironmentOverridesConfig) {
    const auto cfg = write("c.cfg", "gamma_fun = 0.01\n");
    const auto base = invoke({"steady", "--config", cfg});
    const auto env = invoke({"steady", "--config", cfg}, {"FUNDIFF_ETA=0.5", "UNRELATED=1"});
    ASSERT_EQ(env.code, kExitOk);
    EXPECT_NE(base.out, env.out);
    EXPECT_NE(env.out.find("# eta = 0.5"), std::string::npos);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
    for (const char* fig : {"1", "2", "3", "4"}) {
        ASSERT_EQ(invoke({"figure", fig, "--out", path("a.csv")}).code, kExitOk) << fig;
        ASSERT_EQ(invoke({"figure", fig, "--out", path("b.csv")}).code, kExitOk) << fig;
        EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv"))) << fig;
    }
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
    ASSERT_EQ(invoke({"figure", "2", "--out", path("a.csv")}).code, kExitOk);
    ASSERT_EQ(invoke({"figure", "2", "--threads", "3", "--out", path("b.csv")}).code, kExitOk);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, HeaderReproducesFile) {
    const auto cfg = write("c.cfg", "omega_m = 1\ngamma_env = 0.2\nfig1.gamma_fun_values = 0.01, 0.03\n"
                                    "fig1.eta_points = 7\n");
    ASSERT_EQ(invoke({"figure", "1", "--config", cfg, "--out", path("a.csv")}).code, kExitOk);
    std::istringstream in(slurp(path("a.csv")));
    std::string line, header;
    while (std::getline(in, line) && line.starts_with("#")) {
        if (line.starts_with("# ") && !line.starts_with("# NOTE:")) header += line.substr(2) + "\n";
    }
    const auto regen = write("regen.cfg", header);
    ASSERT_EQ(invoke({"figure", "1", "--config", regen, "--out", path("b.csv")}).code, kExitOk);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, JsonOutputParses) {
    const auto r = invoke({"figure", "1", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["columns"][0], "eta");
    EXPECT_EQ(j["rows"].size(), 300u);
    EXPECT_EQ(j["meta"]["units"], "natural");
}

TEST_F(CliTest, DivergentCellsAreNull) {
    const auto cfg = write("c.cfg", "fig2.eta_min = 0.99\nfig2.eta_points = 2\nfig2.ratio_points = 2\n");
    const auto r = invoke({"figure", "2", "--config", cfg, "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["rows"].size(), 4u);
    EXPECT_FALSE(j["rows"][0][4].is_null());
    const auto& row = j["rows"][2];
    EXPECT_EQ(row[0], 1.0);
    EXPECT_EQ(row[1], 0.0);
    EXPECT_TRUE(row[4].is_null());
    EXPECT_EQ(row[6], true);
    EXPECT_EQ(row[7], "divergent");
}

TEST_F(CliTest, TrajectoryWritesDumpAndSummary) {
    const auto cfg = write("c.cfg", "trajectory.n_traj = 20\ntrajectory.n_steps = 50\n");
    const auto r = invoke({"trajectory", "--config", cfg, "--seed", "3", "--out", path("t.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(path("t.summary.csv")));
    EXPECT_NE(slurp(path("t.csv")).find("traj_id,step,t,x_mean,p_mean"), std::string::npos);
    EXPECT_NE(r.out.find("max_abs_z"), std::string::npos);
    const auto again = invoke({"trajectory", "--config", cfg, "--seed", "3", "--out", path("u.csv")});
    EXPECT_EQ(slurp(path("t.csv")), slurp(path("u.csv")));
}

TEST(BackedOut, SolvesUnmonitoredRunCount) {
    const double ge = 0.1;
    const double gf = backed_out_gamma_fun(ge, 1e6);
    EXPECT_NEAR(4.0 * (ge + gf) * (ge + gf) / (gf * gf), 1e6, 1e-3);
}

}  // namespace
}  // namespace fundiff::cli
