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


#include "swapcert/io.hpp"

#include <numbers>
#include <sstream>

#include "gtest/gtest.h"

#include "swapcert/instances.hpp"

using namespace swapcert;

TEST(Format, NineSignificantDigits) {
  EXPECT_EQ(format9(2 * std::numbers::sqrt2), "2.82842712");
  EXPECT_DOUBLE_EQ(round9(1.0 / 3.0), 0.333333333);
  EXPECT_EQ(json_optional(std::nullopt), Json(nullptr));
}

TEST(MatrixJson, RoundTripAndErrors) {
  Rng rng(1);
  const ComplexMatrix m = random_ginibre(rng, 2, 3);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(m));
  EXPECT_LT(max_abs(back - m), 1e-8);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"data":[[1,0]]})")), ParseError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"data":[["a",0]]})")),
               ParseError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"cols":1,"data":[[1,0]]})")), ParseError);
}

TEST(ScenarioJson, RoundTripPreservesStatistics) {
  const Scenario sc = noisy_scenario(0.9, 0.8, 0.2);
  const Scenario back = scenario_from_json(Json::parse(scenario_to_json(sc).dump()));
  const ChshReport a = chsh_report(sc), b = chsh_report(back);
  EXPECT_NEAR(a.s_ac, b.s_ac, 1e-7);
  EXPECT_NEAR(a.s_bc, b.s_bc, 1e-7);
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(*a.s_ab[c], *b.s_ab[c], 1e-7);
}

TEST(ScenarioJson, RejectsBadDims) {
  Json j = scenario_to_json(ideal_scenario());
  j["dims"] = {2, 2, 2};
  EXPECT_THROW(scenario_from_json(j), ParseError);
  j["dims"] = {2, 2, 2, 3};
  EXPECT_THROW(scenario_from_json(j), ValidationError);
}

TEST(ReportJson, RoundTripAndMissingOutcome) {
  const ChshReport r = chsh_report(noisy_scenario(0.95, 0.95, 0.1));
  const Json j = report_to_json(r);
  EXPECT_EQ(j["relabeling"], Json({1, 2, 3, 4}));
  const ChshReport back = report_from_json(j);
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(*back.s_ab[c], *r.s_ab[c], 1e-8);

  Json missing = j;
  missing["S_AB_given_c"][1] = nullptr;
  try {
    report_from_json(missing);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("outcome c=2"), std::string::npos);
  }
  Json short_list = j;
  short_list["S_AB_given_c"] = {2.8, 2.8, 2.8};
  EXPECT_THROW(report_from_json(short_list), ParseError);
}

TEST(ReportJson, SigmaRoundTrip) {
  const ChshReport r = estimate_report(sample_counts(ideal_scenario(), 1000, 3));
  const ChshReport back = report_from_json(report_to_json(r));
  ASSERT_TRUE(back.errors.has_value());
  EXPECT_NEAR(back.errors->s_ac, r.errors->s_ac, 1e-8);
  for (int c = 0; c < 4; ++c)
    EXPECT_EQ(back.errors->s_ab[c].has_value(), r.errors->s_ab[c].has_value());
}

TEST(CountsCsv, RoundTrip) {
  const Counts k = sample_counts(noisy_scenario(0.9, 0.9, 0.1), 500, 17);
  std::stringstream ss;
  write_counts_csv(ss, k);
  EXPECT_EQ(read_counts_csv(ss), k);
}

TEST(CountsCsv, RowsInAnyOrderAccumulate) {
  std::istringstream in("x,y,z,a,b,c,count\n2,1,3,-1,1,4,5\n2,1,3,-1,1,4,2\n");
  const Counts k = read_counts_csv(in);
  EXPECT_EQ(k.at(1, 0, 2, JointDistribution::cell(1, 0, 3)), 7u);
}

TEST(CountsCsv, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_counts_csv(in);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("x,y,z,a,b,c,count\n1,1,1,1,1,1,3\n1,1,4,1,1,1,3\n").find("line 3"),
            std::string::npos);
  EXPECT_NE(message("x,y,z,a,b,c,count\n1,1,1,0,1,1,3\n").find("a and b"), std::string::npos);
  EXPECT_NE(message("x,y,z,a,b,c,count\n1,1,1,1,1,1,-3\n").find("non-negative"),
            std::string::npos);
  EXPECT_NE(message("x,y,z,a,b,c,count\n1,1,1,1,1,1\n").find("7 fields"), std::string::npos);
  EXPECT_NE(message("a,b\n").find("header"), std::string::npos);
  EXPECT_FALSE(message("").empty());
}

TEST(SettingsJson, RoundTripThroughDecomposition) {
  const SettingsFile s{ideal_alice(), ideal_bob()};
  const SettingsFile back = settings_from_json(settings_to_json(s));
  const Decomposition d = decompose(back.alice[0], back.alice[1], back.bob[0], back.bob[1]);
  const Json j = decomposition_to_json(d);
  EXPECT_NEAR(j["lambda"].get<double>(), 2 * std::numbers::sqrt2, 1e-8);
  // sqrt(8 - lambda^2) magnifies the 9-digit rounding of the settings file
  EXPECT_NEAR(j["S_sep_formula"].get<double>(), std::numbers::sqrt2, 1e-4);
  EXPECT_FALSE(j.contains("S_sep_oracle"));
}
