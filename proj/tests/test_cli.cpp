// Copyright 2026 The swapcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "swapcert_cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"

using namespace swapcert;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "swapcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("swapcert_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

constexpr double kT = 2 * std::numbers::sqrt2;

}  // namespace

TEST(Cli, IdealPassesBothCriteria) {
  const Result r = run({"ideal"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_NEAR(j["report"]["S_AC"].get<double>(), kT, 1e-8);
  for (const auto& v : j["report"]["S_AB_given_c"]) EXPECT_NEAR(v.get<double>(), kT, 1e-8);
  EXPECT_TRUE(j["verdicts"][0]["passed"].get<bool>());
  EXPECT_TRUE(j["verdicts"][1]["passed"].get<bool>());
  EXPECT_EQ(j["verdicts"][0]["criterion"], "Crit1");
  EXPECT_EQ(j["bounds"]["upper"].get<double>(), 0.0);
  EXPECT_EQ(j["trace_distance"].get<double>(), 0.0);
}

TEST(Cli, NoisyFailsWithExitOne) {
  const Result r = run({"noisy", "--v-ac", "0.9", "--v-bc", "0.9"});
  EXPECT_EQ(r.code, cli::kExitCertFail);
  const Json j = r.json();
  EXPECT_NEAR(j["report"]["S_AC"].get<double>(), 0.9 * kT, 1e-8);
  EXPECT_FALSE(j["verdicts"][1]["passed"].get<bool>());
}

TEST(Cli, PerturbedBellStillCertifies) {
  const Result r = run({"noisy", "--theta", "0.2618"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_NEAR(j["report"]["S_AB_given_c"][0].get<double>(), kT * std::cos(2 * 0.2618), 1e-8);
  EXPECT_NEAR(j["trace_distance"].get<double>(), std::sin(0.2618), 1e-8);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"noisy", "--v-ac", "1.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"certify"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bounds-curve", "--s-min", "2.5", "--s-max", "2.4"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bounds-curve", "--steps", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sample", "--n", "10"}).code, cli::kExitUsage);  // no seed
}

TEST(Cli, BoundsCurveCsvAndJson) {
  const Result csv = run({"bounds-curve", "--s-min", "2", "--s-max", "2.8284271247461903",
                          "--steps", "4"});
  ASSERT_EQ(csv.code, cli::kExitOk);
  std::istringstream in(csv.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "S,lower,upper");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
  const Result js = run({"bounds-curve", "--steps", "2", "--format", "json"});
  ASSERT_EQ(js.code, cli::kExitOk);
  const Json j = js.json();
  ASSERT_EQ(j.size(), 3u);
  EXPECT_NEAR(j[0]["upper"].get<double>(), 0.541196100, 1e-9);
}

TEST(Cli, CertifyReportJson) {
  const std::string good = temp_file(
      "good.json", R"({"S_AC": 2.828427125, "S_BC": 2.5, "S_AB_given_c": [2.1, 2.0, 1.0, 2.05]})");
  const Result r = run({"certify", "--input", good, "--tol", "1e-8"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_TRUE(j["verdicts"][0]["passed"].get<bool>());
  EXPECT_FALSE(j["verdicts"][1]["passed"].get<bool>());
  EXPECT_EQ(j["verdicts"][0]["violated_c"], 1);

  const std::string fail = temp_file(
      "fail.json", R"({"S_AC": 2.7, "S_BC": 2.7, "S_AB_given_c": [2.8, 2.8, 2.8, 2.8]})");
  EXPECT_EQ(run({"certify", "--input", fail}).code, cli::kExitCertFail);

  const std::string missing =
      temp_file("missing.json", R"({"S_AC": 2.8, "S_BC": 2.8, "S_AB_given_c": [2.8, null, 2.8, 2.8]})");
  const Result m = run({"certify", "--input", missing});
  EXPECT_EQ(m.code, cli::kExitValidation);
  EXPECT_NE(m.err.find("c=2"), std::string::npos);

  EXPECT_EQ(run({"certify", "--input", temp_file("broken.json", "{not json")}).code,
            cli::kExitValidation);
  EXPECT_EQ(run({"certify", "--input", "/nonexistent/file.json"}).code, cli::kExitValidation);
}

TEST(Cli, ToleranceFromEnvironment) {
  const std::string near = temp_file(
      "near.json", R"({"S_AC": 2.8284, "S_BC": 2.8284, "S_AB_given_c": [2.8, 2.8, 2.8, 2.8]})");
  EXPECT_EQ(run({"certify", "--input", near}).code, cli::kExitCertFail);
  setenv(cli::kTolEnv, "1e-4", 1);
  EXPECT_EQ(run({"certify", "--input", near}).code, cli::kExitOk);
  // an explicit flag wins over the environment
  EXPECT_EQ(run({"certify", "--input", near, "--tol", "1e-9"}).code, cli::kExitCertFail);
  unsetenv(cli::kTolEnv);
}

TEST(Cli, SampleThenCertifyCounts) {
  const Result s = run({"sample", "--n", "20000", "--seed", "11"});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  const std::string csv = temp_file("counts.csv", s.out);
  // finite statistics miss 2 sqrt2 at the default tolerance
  EXPECT_EQ(run({"certify", "--input", csv}).code, cli::kExitCertFail);
  const Result r = run({"certify", "--input", csv, "--tol-sigma", "5"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  EXPECT_TRUE(r.json()["report"].contains("sigma"));

  const Result again = run({"sample", "--n", "20000", "--seed", "11"});
  EXPECT_EQ(again.out, s.out);
}

TEST(Cli, SampleJsonReport) {
  const Result s = run({"sample", "--n", "5000", "--seed", "2", "--format", "json", "--v-ac", "0.9"});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  EXPECT_NEAR(s.json()["S_AC"].get<double>(), 0.9 * kT, 0.1);
}

TEST(Cli, SampleFromScenarioFile) {
  const std::string sc = temp_file("scenario.json", scenario_to_json(ideal_scenario()).dump());
  const Result s = run({"sample", "--scenario", sc, "--n", "100", "--seed", "1"});
  EXPECT_EQ(s.code, cli::kExitOk) << s.err;
  const std::string bad = temp_file("bad_scenario.json", R"({"dims": [2, 2]})");
  EXPECT_EQ(run({"sample", "--scenario", bad, "--n", "100", "--seed", "1"}).code,
            cli::kExitValidation);
}

TEST(Cli, CertifyBadCounts) {
  const std::string csv = temp_file("bad.csv", "x,y,z,a,b,c,count\n1,1,1,1,1,9,3\n");
  const Result r = run({"certify", "--input", csv});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, DecomposeAndSepBound) {
  const std::string settings =
      temp_file("settings.json", settings_to_json({ideal_alice(), ideal_bob()}).dump());
  const Result d = run({"decompose", "--settings", settings});
  ASSERT_EQ(d.code, cli::kExitOk) << d.err;
  EXPECT_NEAR(d.json()["S_sep_formula"].get<double>(), std::numbers::sqrt2, 1e-4);  // settings file carries 9 digits
  EXPECT_EQ(d.json()["alice_blocks"].size(), 1u);

  const Result s = run({"sep-bound", "--settings", settings, "--seed", "4", "--restarts", "4"});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  EXPECT_NEAR(s.json()["S_sep_oracle"].get<double>(), std::numbers::sqrt2, 1e-4);
  EXPECT_EQ(run({"sep-bound", "--settings", settings}).code, cli::kExitUsage);

  const std::string bad = temp_file(
      "bad_settings.json",
      R"({"alice": [{"rows":1,"cols":1,"data":[[2,0]]}, {"rows":1,"cols":1,"data":[[1,0]]}], "bob": []})");
  EXPECT_EQ(run({"decompose", "--settings", bad}).code, cli::kExitValidation);
}

TEST(Cli, OutFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "swapcert_test_out.json";
  std::filesystem::remove(path);
  const Result r = run({"--out", path.string(), "ideal"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_TRUE(Json::parse(in)["verdicts"][0]["passed"].get<bool>());
}
