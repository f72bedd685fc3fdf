#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "coeffid_cli.hpp"

using namespace coeffid;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coeffid_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ForwardUnitProblem) {
  const auto r = run({"forward", "--a", "const:1", "--f", "const:1", "--n", "1024"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  const auto u = grid_function_from_json(j["u"]);
  EXPECT_NEAR(u[512], 0.125, 1e-8);
  EXPECT_NEAR(j["Ca"].get<double>(), 0.5, 1e-15);
}

TEST(Cli, DyadicRate) {
  const auto r = run({"dyadic", "--alpha", "2", "--beta", "0", "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  const double gamma = j["results"]["gamma"].get<double>();
  EXPECT_NEAR(j["results"]["measured_slope"].get<double>(), gamma, 0.15 * gamma);
}

TEST(Cli, DyadicFailsUnderTightSlopeTolerance) {
  const auto r = run({"dyadic", "--alpha", "2", "--p", "1", "--tol", "slope=1e-6"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("verification failed"), std::string::npos);
}

TEST(Cli, Pw2dVerify) {
  const auto r = run({"pw2d", "verify", "--m", "64", "--trials", "10", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  const double slack = j["results"]["slack"].get<double>();
  EXPECT_DOUBLE_EQ(slack, 1.0 + 5.0 / 64);
  for (const auto& t : j["results"]["trials"]) EXPECT_LE(t["max_ratio"].get<double>(), slack);
}

TEST(Cli, UsageErrors) {
  auto r = run({"forward", "--a", "const:1", "--f", "const:1", "--bogus", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"forward", "--a", "const:x", "--f", "const:1"}).code, 2);
  EXPECT_EQ(run({"forward", "--a", "banana", "--f", "const:1"}).code, 2);
  EXPECT_EQ(run({"forward", "--a", "const:3", "--f", "const:1"}).code, 2);
}

TEST(Cli, EveryHelpExitsZero) {
  for (const auto& args : std::vector<std::vector<std::string>>{{"--help"},
                                                                 {"forward", "--help"},
                                                                 {"recover", "--help"},
                                                                 {"exponents", "--help"},
                                                                 {"holder", "--help"},
                                                                 {"dyadic", "--help"},
                                                                 {"counterexample", "--help"},
                                                                 {"counterexample", "volterra", "--help"},
                                                                 {"counterexample", "inhomogeneous", "--help"},
                                                                 {"coarea", "--help"},
                                                                 {"pw2d", "--help"},
                                                                 {"pw2d", "verify", "--help"},
                                                                 {"pw2d", "recover", "--help"}}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << args.front() << " " << args.back();
    EXPECT_FALSE(r.out.empty() && r.err.empty());
  }
}

TEST(Cli, HolderVanishingSourceExitsOne) {
  const auto r = run({"holder", "--a", "const:1", "--b", "const:1.5", "--f", "const:0", "--alpha", "1", "--beta", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("identifiability violation"), std::string::npos);
}

TEST(Cli, OutputDirectoryIsDeterministicWithChecksums) {
  const fs::path d1 = fresh_dir("a"), d2 = fresh_dir("b");
  const std::vector<std::string> base{"counterexample", "volterra", "--level", "2", "--n", "4096"};
  auto args1 = base, args2 = base;
  args1.insert(args1.end(), {"--out", d1.string()});
  args2.insert(args2.end(), {"--out", d2.string()});
  ASSERT_EQ(run(args1).code, 0);
  ASSERT_EQ(run(args2).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(d1)) {
    ++files;
    EXPECT_EQ(read_file(e.path().string()), read_file((d2 / e.path().filename()).string())) << e.path();
  }
  EXPECT_GE(files, 3u);
  const auto manifest = Json::parse(read_file((d1 / "manifest.json").string()));
  for (const auto& o : manifest["outputs"]) {
    const std::string text = read_file((d1 / o["file"].get<std::string>()).string());
    EXPECT_EQ(o["fnv1a64"].get<std::string>(), cli::hex64(cli::fnv1a64(text)));
  }
  for (const auto& a : manifest["argv"]) EXPECT_EQ(a.get<std::string>().find("coeffid_cli_test_"), std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Cli, RecoverFromForwardCsvColumn) {
  const fs::path d = fresh_dir("roundtrip");
  ASSERT_EQ(run({"forward", "--a", "linear:1,0.5", "--f", "linear:1,-2", "--n", "2048", "--format", "csv", "--out",
                 d.string()})
                .code,
            0);
  ASSERT_TRUE(fs::exists(d / "forward.csv"));
  EXPECT_FALSE(fs::exists(d / "forward.json"));
  const auto r = run({"recover", "--du", (d / "forward.csv#du").string(), "--f", "linear:1,-2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto a = grid_function_from_json(Json::parse(r.out)["a"]);
  const auto truth = GridFunction1D::sample(a.interval(), a.cells(), [](double x) { return 1 + 0.5 * x; });
  EXPECT_LT(lp_norm(a - truth, 1.0), 1e-3);
  fs::remove_all(d);
}

TEST(Cli, CounterexamplesAndCoarea) {
  auto r = run({"counterexample", "inhomogeneous", "--n", "65536"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = run({"coarea", "--h", "linear:0,1", "--n", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["passed"].get<bool>());
}

TEST(Cli, TolOptionNeedsNameValue) { EXPECT_EQ(run({"dyadic", "--tol", "slope"}).code, 2); }
