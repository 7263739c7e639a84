// Copyright 2026 The qert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include "qert/cli.hpp"
#include "qert/dsl.hpp"
#include "qert/json_io.hpp"
#include "test_util.hpp"

namespace qert {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;

    json parsed() const { return json::parse(out); }
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qert");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("qert_cli_" + std::string(info->name()) + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        ASSERT_EQ(invoke({"corpus", "--emit", dir_.string()}).code, 0);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
        return path(name);
    }

    fs::path dir_;
};

TEST(ParseKet, Forms) {
    const Layout qubit({{"q", 2}});
    EXPECT_EQ(cli::parse_ket("|1>", qubit), (CVector(2) << 0, 1).finished());
    const double s = 1 / std::sqrt(2.0);
    EXPECT_LT((cli::parse_ket("|->", qubit) - (CVector(2) << s, -s).finished()).norm(), 1e-15);
    EXPECT_LT((cli::parse_ket("|+>", qubit) - (CVector(2) << s, s).finished()).norm(), 1e-15);
    const Layout two({{"a", 2}, {"b", 3}});
    EXPECT_EQ(cli::parse_ket("|12>", two)(5), Complex(1, 0));
    EXPECT_THROW(cli::parse_ket("|13>", two), Error);
    EXPECT_THROW(cli::parse_ket("|1>", two), Error);
    const Layout walk5({{"q", 2}, {"p", 5}});
    EXPECT_EQ(cli::parse_ket("L,1", walk5)(1), Complex(1, 0));
    EXPECT_EQ(cli::parse_ket("R,4", walk5)(9), Complex(1, 0));
    EXPECT_THROW(cli::parse_ket("R,5", walk5), Error);
    EXPECT_THROW(cli::parse_ket("|+>", two), Error);
    const Layout qutrit({{"t", 3}});
    EXPECT_EQ(cli::parse_ket("|2>", qutrit)(2), Complex(1, 0));
    EXPECT_THROW(cli::parse_ket("2", qutrit), Error);
}

TEST(ParseCoin, NormalizationWindow) {
    const auto h = cli::parse_coin("0.70710678,0.70710678");
    EXPECT_NEAR(std::norm(h.a()) + std::norm(h.b()), 1.0, 1e-15);
    EXPECT_NEAR(cli::parse_coin("0.6, -0.8").b().real(), -0.8, 1e-15);
    EXPECT_EQ(cli::parse_coin("0.6i,0.8").a(), Complex(0, 0.6));
    EXPECT_THROW(cli::parse_coin("0.6,0.7"), Error);
    EXPECT_THROW(cli::parse_coin("0.6"), Error);
}

TEST(SourceHash, StableAndSensitive) {
    EXPECT_EQ(cli::source_hash(""), "fnv1a64:cbf29ce484222325");
    EXPECT_EQ(cli::source_hash("a"), "fnv1a64:af63dc4c8601ec8c");
    EXPECT_NE(cli::source_hash("prog { skip }"), cli::source_hash("prog { skip } "));
}

TEST(Environment, EpsSpecOverride) {
    ::unsetenv("QERT_EPS_SPEC");
    EXPECT_EQ(cli::options_from_environment().eps_spec, tol::kEpsSpec);
    ::setenv("QERT_EPS_SPEC", "1e-6", 1);
    EXPECT_EQ(cli::options_from_environment().eps_spec, 1e-6);
    ::setenv("QERT_EPS_SPEC", "banana", 1);
    EXPECT_THROW(cli::options_from_environment(), Error);
    ::setenv("QERT_EPS_SPEC", "2", 1);
    EXPECT_THROW(cli::options_from_environment(), Error);
    ::unsetenv("QERT_EPS_SPEC");
}

TEST_F(CliFiles, CorpusManifest) {
    std::ifstream in(dir_ / "manifest.json");
    const json m = json::parse(in);
    EXPECT_EQ(m["version"], 1);
    std::map<std::string, json> by_file;
    for (const auto& p : m["programs"]) {
        by_file[p["file"]] = p;
        EXPECT_TRUE(fs::exists(dir_ / p["file"].get<std::string>()));
    }
    EXPECT_EQ(by_file.at("geo.qw")["checks"][0]["expected"], 5.0);
    EXPECT_EQ(by_file.at("div.qw")["checks"][0]["expected"], "infinity");
    EXPECT_EQ(by_file.at("qbf_p0.5.qw")["checks"][0]["expected"], 17.0);
    bool walk5 = false;
    for (const auto& c : by_file.at("walk_n5.qw")["checks"])
        if (c["state"] == "L,1" && c["quantity"] == "measurements") {
            EXPECT_EQ(c["expected"], 5.0);
            walk5 = true;
        }
    EXPECT_TRUE(walk5);

    // Emitting twice gives identical bytes.
    const fs::path again = dir_ / "again";
    ASSERT_EQ(invoke({"corpus", "--emit", again.string()}).code, 0);
    for (const auto& [file, _] : by_file) {
        std::ifstream a(dir_ / file), b(again / file);
        EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}),
                  std::string(std::istreambuf_iterator<char>(b), {}))
            << file;
    }
}

TEST_F(CliFiles, AnalyzeGeometric) {
    const auto r = invoke({"analyze", path("geo.qw"), "--pure", "|1>"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = r.parsed();
    EXPECT_NEAR(j["value"].get<double>(), 5.0, 1e-9);
    EXPECT_EQ(j["verdict"], "a.s.-terminating");
    EXPECT_EQ(j["dimension"], 2);
    EXPECT_EQ(j["termination_dim"], 2);
    EXPECT_NEAR(j["ert_norm"].get<double>(), 5.0, 1e-9);
    EXPECT_EQ(j["source_hash"].get<std::string>().rfind("fnv1a64:", 0), 0u);
    const CMatrix ert = json_io::matrix_from_json(j["ert_matrix"]);
    EXPECT_NEAR(ert(1, 1).real(), 5.0, 1e-9);
    EXPECT_TRUE(j.contains("timings"));
    EXPECT_FALSE(j.contains("oracles"));
}

TEST_F(CliFiles, AnalyzeWithOracles) {
    const auto r = invoke({"analyze", path("geo.qw"), "--pure", "|1>", "--oracles", "--shots", "4000",
                           "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json o = r.parsed()["oracles"];
    EXPECT_TRUE(o["unfolding"]["converged"].get<bool>());
    EXPECT_NEAR(o["unfolding"]["last_term"].get<double>(), 5.0, 1e-9);
    const double mean = o["monte_carlo"]["mean"];
    const double se = o["monte_carlo"]["stderr"];
    EXPECT_LT(std::abs(mean - 5.0), 4 * se);
    EXPECT_EQ(o["monte_carlo"]["seed"], 9);
}

TEST_F(CliFiles, AnalyzeBernoulliMixed) {
    const auto r = invoke({"analyze", path("qbf_p0.3.qw"), "--maximally-mixed"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.parsed()["value"].get<double>(), 17.0, 1e-8);
}

TEST_F(CliFiles, AnalyzeDivergent) {
    const auto r = invoke({"analyze", path("div.qw"), "--pure", "|1>"});
    EXPECT_EQ(r.code, 2);
    const json j = r.parsed();
    EXPECT_EQ(j["value"], "infinity");
    EXPECT_EQ(j["verdict"], "divergent-on-input");
    EXPECT_EQ(j["termination_dim"], 1);

    const auto ok = invoke({"analyze", path("div.qw"), "--pure", "|0>"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.parsed()["verdict"], "divergent-somewhere");
    EXPECT_NEAR(ok.parsed()["value"].get<double>(), 1.0, 1e-12);
}

TEST_F(CliFiles, AnalyzeDensityFile) {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    const auto file = write("rho.json", json_io::matrix_to_json(rho).dump());
    const auto r = invoke({"analyze", path("geo.qw"), "--rho", file});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.parsed()["value"].get<double>(), 3.0, 1e-9);

    const auto bad = write("bad.json", json_io::matrix_to_json(CMatrix::Identity(2, 2)).dump());
    EXPECT_EQ(invoke({"analyze", path("geo.qw"), "--rho", bad}).code, 1);
    const auto wrong = write("wrong.json", json_io::matrix_to_json(CMatrix::Identity(3, 3) / 3.0).dump());
    EXPECT_EQ(invoke({"analyze", path("geo.qw"), "--rho", wrong}).code, 1);
}

TEST_F(CliFiles, AnalyzeErrors) {
    const auto broken = write("broken.qw", "var q:2;\nprog { q := H[r] }\n");
    const auto r = invoke({"analyze", broken, "--pure", "|0>"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("2:15"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("undeclared variable"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(invoke({"analyze", path("missing.qw"), "--pure", "|0>"}).code, 1);
    EXPECT_EQ(invoke({"analyze", path("geo.qw"), "--pure", "|5>"}).code, 1);
    EXPECT_EQ(invoke({"analyze", path("geo.qw"), "--pure", "|1>", "--maximally-mixed"}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliFiles, SimulateIsSeedDeterministic) {
    const std::vector<std::string> args{"simulate", path("geo.qw"), "--pure", "|1>", "--shots", "2000",
                                        "--seed", "17"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const json j = a.parsed();
    EXPECT_EQ(j["shots"], 2000);
    EXPECT_EQ(j["seed"], 17);
    EXPECT_LT(std::abs(j["mean"].get<double>() - 5.0), 4 * j["stderr"].get<double>());
    auto other = args;
    other.back() = "18";
    EXPECT_NE(invoke(other).out, a.out);
}

TEST_F(CliFiles, SimulateDivergent) {
    const auto r = invoke({"simulate", path("div.qw"), "--pure", "|1>", "--shots", "50", "--max-steps", "200"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.parsed()["timeouts"], 50);
    EXPECT_EQ(r.parsed()["completed"], 0);
}

TEST(CliWalk, HeadlineAndStates) {
    auto r = invoke({"walk", "--n", "5", "--coin", "0.70710678,0.70710678", "--state", "L,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = r.parsed();
    const json& block = j.contains("closed") ? j["closed"] : j["numeric"];
    EXPECT_NEAR(block["expected_steps"].get<double>(), 5.0, 1e-9);

    r = invoke({"walk", "--n", "5", "--state", "L,0"});
    ASSERT_EQ(r.code, 0) << r.err;
    j = r.parsed();
    const json& b0 = j.contains("closed") ? j["closed"] : j["numeric"];
    EXPECT_NEAR(b0["expected_steps"].get<double>(), 1.0, 1e-9);
}

TEST(CliWalk, BothModesAgree) {
    const auto r = invoke({"walk", "--n", "9", "--mode", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = r.parsed();
    EXPECT_LT(j["discrepancy_frobenius"].get<double>(), 1e-6);
    EXPECT_LT(j["closed"]["fixed_point_residual"].get<double>(), 1e-8);
    EXPECT_LT(j["numeric"]["fixed_point_residual"].get<double>(), 1e-8);
    const CMatrix q = json_io::matrix_from_json(j["numeric"]["q_matrix"]);
    EXPECT_EQ(q.rows(), 18);
}

TEST(CliWalk, ComplexCoinUsesReduction) {
    const auto r = invoke({"walk", "--n", "4", "--coin", "0.70710678i,0.70710678", "--mode", "both",
                           "--state", "R,2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = r.parsed();
    EXPECT_LT(j["discrepancy_frobenius"].get<double>(), 1e-6);
    EXPECT_NEAR(j["closed"]["expected_steps"].get<double>(), j["numeric"]["expected_steps"].get<double>(), 1e-8);
}

TEST(CliWalk, Errors) {
    EXPECT_EQ(invoke({"walk", "--n", "1"}).code, 1);
    EXPECT_EQ(invoke({"walk", "--n", "5", "--coin", "0.6,0.7"}).code, 1);
    EXPECT_EQ(invoke({"walk", "--n", "5", "--mode", "sideways"}).code, 1);
    EXPECT_EQ(invoke({"walk", "--n", "5", "--state", "L,9"}).code, 1);
    EXPECT_EQ(invoke({"walk", "--n", "5", "--coin", "0,1", "--mode", "closed"}).code, 1);
}

TEST(JsonIo, MatrixRoundTrip) {
    testing::Rng rng(61);
    const CMatrix m = testing::random_matrix(rng, 3, 4);
    EXPECT_EQ(json_io::matrix_from_json(json::parse(json_io::matrix_to_json(m).dump())), m);
    EXPECT_THROW(json_io::matrix_from_json(json::parse(R"({"rows":2,"cols":2,"data":[[1,0]]})")), Error);
    EXPECT_EQ(json_io::ert_to_json(ErtValue::infinite()), "infinity");
    EXPECT_EQ(json_io::ert_to_json(ErtValue::finite(2.5)), 2.5);
}

}  // namespace
}  // namespace qert
