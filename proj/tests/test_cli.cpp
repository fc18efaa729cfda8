#include "berrytop/cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace berrytop;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("berrytop-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content = {}) const {
        const auto p = path_ / name;
        if (!content.empty()) std::ofstream(p) << content;
        return p.string();
    }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, BerryRashbaUnitCircle) {
    const auto r = run({"berry", "--system", "rashba", "--loop", "circle:r=1", "--steps", "4096"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_NEAR(j["phase"].get<double>(), std::numbers::pi, 1e-6);
    EXPECT_EQ(j["winding"], 1);
}

TEST(Cli, BerryOptions) {
    auto r = run({"berry", "--system", "bilayer", "--loop", "circle:r=0.5,turns=2", "--reverse"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json()["phase"].get<double>(), -4 * std::numbers::pi, 1e-6);
    r = run({"berry", "--system", "rashba", "--param", "eta_R=2", "--branch", "-1", "--loop", "polyline:1,1,0;-1,1,0;-1,-1,0;1,-1,0", "--steps", "40000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json()["phase"].get<double>(), -std::numbers::pi, 1e-6);
}

TEST(Cli, Catalog) {
    const auto r = run({"catalog"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["systems"].size(), 8u);
}

TEST(Cli, FluxAndWinding) {
    auto r = run({"flux", "--surface", "sphere:r=1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json()["flux"].get<double>(), 4 * std::numbers::pi, 1e-4);
    r = run({"flux", "--system", "gapped-rashba", "--surface", "disk:r=50"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json()["flux_over_2pi"].get<double>(), 1.0, 1e-2);
    r = run({"flux", "--system", "identity", "--field", "curvature", "--surface", "sphere:r=0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json()["flux_over_4pi"].get<double>(), 1.0, 1e-4);
    r = run({"winding", "--system", "dresselhaus"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["winding"], -1);
}

TEST(Cli, MapWritesCsvDeterministically) {
    TempDir dir;
    const auto a = dir.file("a.csv"), b = dir.file("b.csv");
    auto r = run({"map", "--system", "rashba", "--quantity", "curvature", "--plane", "z=0", "--range", "1", "--grid", "3", "--out", a});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("1 of 9"), std::string::npos);
    r = run({"map", "--system", "rashba", "--quantity", "curvature", "--plane", "z=0", "--range", "1", "--grid", "3", "--out", b});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(slurp(a).find("nan"), std::string::npos);
}

TEST(Cli, MalformedCustomSpecNamesComponentAndOffset) {
    TempDir dir;
    const auto spec = dir.file("custom.json", R"({"name":"bad","bx":"ky","by":"kx + * 2","bz":"0"})");
    const auto r = run({"map", "--system", spec, "--quantity", "curvature", "--plane", "z=0", "--range", "2", "--grid",
                        "64", "--out", dir.file("c.csv")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("by"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("byte 5"), std::string::npos) << r.err;
}

TEST(Cli, CustomSpecRuns) {
    TempDir dir;
    const auto spec = dir.file("g.json", R"({"name":"g","params":{"delta":0.5},"bx":"ky","by":"-kx","bz":"delta"})");
    const auto r = run({"berry", "--system", spec, "--param", "delta=0.5", "--loop", "circle:r=2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json()["phase"].get<double>(), std::numbers::pi * (1 - 0.5 / std::sqrt(4.25)), 1e-6);
    EXPECT_FALSE(r.json().contains("winding"));
}

TEST(Cli, InputErrorsNameTheFlag) {
    auto r = run({"berry", "--system", "nosuch"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--system"), std::string::npos);
    r = run({"berry", "--loop", "square:r=1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--loop"), std::string::npos);
    r = run({"berry", "--param", "eta_D=1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--param"), std::string::npos);
    r = run({"map", "--grid", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--grid"), std::string::npos);
    r = run({"map", "--plane", "q=1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--plane"), std::string::npos);
    r = run({"trajectory", "--k", "1,2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--k"), std::string::npos);
    r = run({"berry", "--branch", "up"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--branch"), std::string::npos);
    r = run({"frobnicate"});
    EXPECT_EQ(r.code, 2);
    r = run({});
    EXPECT_EQ(r.code, 2);
    r = run({"berry", "--system", "rashba", "--loop", "circle:r=1,cx=1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("b(k)"), std::string::npos) << r.err;
}

TEST(Cli, Trajectory) {
    auto r = run({"trajectory", "--system", "gapped-rashba", "--k", "0.5,0.2,0", "--steps", "1000", "--stride", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["samples"].size(), 11u);
    r = run({"trajectory", "--system", "gapped-rashba", "--ensemble", "20", "--seed", "5", "--steps", "500"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto again = run({"trajectory", "--system", "gapped-rashba", "--ensemble", "20", "--seed", "5", "--steps", "500"});
    EXPECT_EQ(r.out, again.out);
    EXPECT_EQ(r.json()["used"], 20);
}

TEST(Cli, Hopf) {
    const auto r = run({"hopf", "--theta", "1.5707963267948966", "--phi", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_NEAR(j["north"]["a_phi"].get<double>(), 0.5, 1e-8);
    EXPECT_NEAR(j["south"]["a_phi"].get<double>(), -0.5, 1e-8);
    EXPECT_LT(j["fiber_residual"].get<double>(), 1e-10);
}

TEST(Cli, VerifySingleSuite) {
    const auto r = run({"verify", "--suite", "charts"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_GE(j["checks"].size(), 4u);
    EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
}

TEST(Cli, Help) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("berry"), std::string::npos);
}
