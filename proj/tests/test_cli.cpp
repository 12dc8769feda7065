#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using berg::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json call_json(std::vector<std::string> args) {
  auto r = call(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, CartanCoeffs) {
  auto j = call_json({"cartan-coeffs", "--domain", "cartan:III:2", "--mu", "1"});
  EXPECT_EQ(j["a1"].get<double>(), -4.5);
  EXPECT_EQ(j["a2"].get<double>(), 6.5);
  EXPECT_EQ(j["p"], 3);
  EXPECT_EQ(j["d"], 3);
}

TEST(Cli, BergmanPoly) {
  auto j = call_json({"bergman-poly", "--domain", "ball:2", "--mu", "1"});
  EXPECT_EQ(j["coefficients"], json::parse("[2.0, -3.0, 1.0]"));
}

TEST(Cli, Classify) {
  auto j = call_json({"classify", "--d", "2", "--d0", "1", "--a1", "-3", "--a2", "2"});
  EXPECT_EQ(j["constant"], true);
  EXPECT_EQ(j["F"], "log:A=1,c=1");
  EXPECT_EQ(j["expected"]["a1"].get<double>(), -6.0);
  EXPECT_EQ(j["expected"]["a2"].get<double>(), 11.0);
  auto n = call_json({"classify", "--d", "2", "--d0", "1", "--a1", "-3", "--a2", "2.1"});
  EXPECT_EQ(n["constant"], false);
  auto c = call_json({"classify", "--domain", "ball:1", "--mu", "0.5", "--d0", "1"});
  EXPECT_EQ(c["F"], "log:A=1.5,c=1");
}

TEST(Cli, SweepBallOne) {
  auto j = call_json({"sweep", "--domain", "ball:1", "--mu", "1", "--d0", "1", "--F", "log:A=1,c=1", "--grid",
                      "-0.7:0.7:8"});
  ASSERT_EQ(j["records"].size(), 8u);
  for (const auto& r : j["records"]) EXPECT_TRUE(r["pass"].get<bool>());
  EXPECT_NEAR(j["summary"]["mean_a1"].get<double>(), -3.0, 1e-9);
}

TEST(Cli, SweepFlatCsv) {
  auto r = call({"sweep", "--domain", "flat:1", "--F", "exp:c=1", "--grid", "-0.5:0.5:4", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string header, line;
  std::getline(is, header);
  EXPECT_EQ(header.rfind("p0_re,p0_im,p1_re,p1_im,t,x,k_oracle,k_closed,ric2_oracle", 0), 0u);
  EXPECT_EQ(header.substr(header.size() - 15), "a2_gap_rel,pass");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') {
      ++rows;
      EXPECT_EQ(line.substr(line.size() - 4), "true");
    }
  EXPECT_EQ(rows, 4);
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(call({"sweep", "--domain", "ball:1", "--F", "log", "--grid", "0:1:0"}).code, 2);
  EXPECT_EQ(call({"eval", "--domain", "torus:1", "--points", "[[0.1]]"}).code, 2);
  EXPECT_EQ(call({"eval", "--domain", "ball:1", "--mu", "-1", "--points", "[[0.1]]"}).code, 2);
  EXPECT_EQ(call({"eval", "--domain", "ball:1", "--d0", "0", "--F", "log", "--points", "[[0.1, 0.1]]"}).code, 2);
  EXPECT_EQ(call({"eval", "--domain", "ball:1", "--F", "sin", "--points", "[[0.1, 0.1]]"}).code, 2);
  EXPECT_EQ(call({"eval", "--domain", "ball:1", "--points", "[[1.5]]"}).code, 2);
  EXPECT_EQ(call({"nonsense"}).code, 2);
  auto r = call({"eval", "--domain", "ball:1", "--points", "[[0.1, 0.2]]"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, PointsFromCsvFile) {
  const std::string path = ::testing::TempDir() + "berg_points.csv";
  {
    std::ofstream f(path);
    f << "# z, w\n0.1,0,0.3,0.1\n-0.2,0.1,0.2,0\n";
  }
  auto j = call_json({"eval", "--domain", "ball:1", "--F", "log", "--points", path});
  EXPECT_EQ(j["records"].size(), 2u);
}

TEST(Cli, DeterministicUnderSeed) {
  const std::vector<std::string> args{"sweep", "--domain", "ball:2", "--F", "log", "--random", "3"};
  setenv("BERG_SEED", "7", 1);
  const auto a = call(args).out;
  const auto b = call(args).out;
  setenv("BERG_SEED", "8", 1);
  const auto c = call(args).out;
  unsetenv("BERG_SEED");
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Cli, SeventeenDigits) {
  auto r = call({"cartan-coeffs", "--domain", "ball:1", "--mu", "3"});
  EXPECT_NE(r.out.find("-0.33333333333333331"), std::string::npos);
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(call({"verify", "--domain", "ball:2", "--mode", "analytic-x"}).code, 0);
  // claiming constancy for a varying configuration is a verification failure
  EXPECT_EQ(call({"verify", "--domain", "ball:1", "--F", "exp", "--mode", "analytic-x", "--expect", "constant"}).code,
            1);
}
