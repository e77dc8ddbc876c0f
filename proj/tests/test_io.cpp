// Copyright 2026 The slslab Authors
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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "slslab/errors.hpp"
#include "slslab/io.hpp"

namespace slslab {
namespace {

std::string ErrorOf(const std::string& text) {
  std::istringstream in(text);
  try {
    read_dataset_csv(in);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(DatasetCsv, RoundTrip) {
  const ComparisonData data(4, {{0, 1, 10, 7}, {1, 2, 5, 0}, {2, 3, 3, 3}, {0, 3, 1, 1}});
  std::ostringstream out;
  write_dataset_csv(out, data);
  std::istringstream in(out.str());
  const ComparisonData back = read_dataset_csv(in);
  ASSERT_EQ(back.num_players(), 4);
  ASSERT_EQ(back.pairs().size(), data.pairs().size());
  for (size_t k = 0; k < data.pairs().size(); ++k) {
    EXPECT_EQ(back.pairs()[k].i, data.pairs()[k].i);
    EXPECT_EQ(back.pairs()[k].j, data.pairs()[k].j);
    EXPECT_EQ(back.pairs()[k].n, data.pairs()[k].n);
    EXPECT_EQ(back.pairs()[k].wins, data.pairs()[k].wins);
  }
}

TEST(DatasetCsv, CommentsAndExplicitPlayerCount) {
  std::istringstream in("# note\ni,j,n,wins_i\n0,1,4,1\n# more\n1,2,4,2\n");
  const ComparisonData data = read_dataset_csv(in, 5);
  EXPECT_EQ(data.num_players(), 5);
  EXPECT_EQ(data.pairs().size(), 2u);
}

TEST(DatasetCsv, ErrorsNameTheLine) {
  EXPECT_NE(ErrorOf("i,j,n,wins_i\n0,1,4,1\n0,1,x,1\n").find("line 3"), std::string::npos);
  EXPECT_NE(ErrorOf("i,j,n,wins_i\n0,1,4,5\n").find("line 2"), std::string::npos);
  EXPECT_NE(ErrorOf("i,j,n,wins_i\n0,1,4\n").find("line 2"), std::string::npos);
  EXPECT_NE(ErrorOf("i,j,n,wins_i\n-1,1,4,1\n").find("line 2"), std::string::npos);
  EXPECT_NE(ErrorOf("a,b,c,d\n0,1,4,1\n"), "");
  EXPECT_NE(ErrorOf(""), "");
}

TEST(DesignCsv, RoundTripAndErrors) {
  const std::vector<DesignEdge> design = {{0, 1, 3}, {1, 2, 4}};
  std::ostringstream out;
  write_design_csv(out, design);
  std::istringstream in(out.str());
  const auto back = read_design_csv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].n, 4);
  std::istringstream bad("i,j,n\n0,1,2\n1,1,2.5\n");
  EXPECT_THROW(read_design_csv(bad), InputError);
}

TEST(ScoresCsv, ExtraColumnsAndOrder) {
  std::istringstream in("index,value,error_indicator\n0,0.5,0.1\n1,-0.5,0.1\n");
  const Vector v = read_scores_csv(in);
  ASSERT_EQ(v.size(), 2);
  EXPECT_EQ(v(0), 0.5);
  EXPECT_EQ(v(1), -0.5);
  std::istringstream gap("index,value\n0,1\n2,1\n");
  EXPECT_THROW(read_scores_csv(gap), InputError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(2.0), "2");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(FormatDouble(v)), v);
}

TEST(ReportCsv, ConfigLineFirst) {
  std::ostringstream out;
  write_reports_csv(out, {MakeReport("fisher_residual", 0.5, 1.0, true, true)}, "{\"a\":1}");
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# config: {\"a\":1}\n", 0), 0u);
  EXPECT_NE(s.find("fisher_residual,0.5,1,0.5,"), std::string::npos);
  std::ostringstream raw;
  write_raw_csv(raw, {{3, "wilks_residual", 0.25, 1.0, true, false}}, "{}");
  EXPECT_NE(raw.str().find("3,wilks_residual,0.25,1,"), std::string::npos);
}

}  // namespace
}  // namespace slslab
