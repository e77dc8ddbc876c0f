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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace slslab::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out, err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "slslab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Result r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void Spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("slslab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    Spit(dir_ / "cfg.json",
         R"({"num_players": 5, "design": {"type": "complete", "n": 60},
             "true_scores": {"type": "linspace", "lo": -1, "hi": 1},
             "replications": 20, "x": 2, "seed": 9, "target": [0, 1],
             "pilot": "noisy:0.2", "q_selectors": [0]})");
    Spit(dir_ / "data.csv", "i,j,n,wins_i\n0,1,4,3\n1,2,4,2\n0,2,4,3\n");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, FitThreeToOneGivesLogThreeGap) {
  Spit(dir_ / "two.csv", "i,j,n,wins_i\n0,1,4,3\n");
  const Result r = Invoke({"fit", "--data", P("two.csv"), "--out", P("fit")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string scores = Slurp(dir_ / "fit" / "scores.csv");
  EXPECT_EQ(scores.rfind("# config: ", 0), 0u);
  std::istringstream in(scores);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("index,value", 0), 0u);
  double v[2];
  for (double& x : v) {
    std::getline(in, line);
    x = std::stod(line.substr(line.find(',') + 1));
  }
  EXPECT_NEAR(v[0] - v[1], std::log(3.0), 1e-8);
  EXPECT_NEAR(v[0] + v[1], 0.0, 1e-12);
}

TEST_F(CliTest, EveryCommandSucceedsAndIsReproducible) {
  const std::vector<std::vector<std::string>> cmds = {
      {"fit", "--data", P("data.csv")},
      {"diagnose", "--config", P("cfg.json")},
      {"expand", "--config", P("cfg.json"), "--ridge", "1"},
      {"mc", "--config", P("cfg.json"), "--threads", "2"},
      {"plugin", "--data", P("data.csv"), "--target", "0", "--rounds", "3"}};
  for (const auto& c : cmds) {
    auto a = c, b = c;
    a.insert(a.end(), {"--out", P(c[0] + "_a")});
    b.insert(b.end(), {"--out", P(c[0] + "_b")});
    const Result ra = Invoke(a), rb = Invoke(b);
    ASSERT_EQ(ra.code, kExitOk) << c[0] << ": " << ra.err;
    ASSERT_EQ(rb.code, kExitOk) << c[0];
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir_ / (c[0] + "_a"))) {
      const fs::path other = dir_ / (c[0] + "_b") / e.path().filename();
      ASSERT_TRUE(fs::exists(other)) << other;
      std::string sa = Slurp(e.path()), sb = Slurp(other);
      // The output directory is part of the embedded config.
      for (auto* s : {&sa, &sb}) {
        for (const char* tag : {"_a", "_b"}) {
          const std::string from = c[0] + tag;
          for (size_t pos; (pos = s->find(from)) != std::string::npos;) s->replace(pos, from.size(), c[0]);
        }
      }
      EXPECT_EQ(sa, sb) << e.path();
      ++files;
    }
    EXPECT_GT(files, 0) << c[0];
  }
}

TEST_F(CliTest, FlagsOverrideConfig) {
  ASSERT_EQ(Invoke({"mc", "--config", P("cfg.json"), "--replications", "3", "--out", P("o")}).code, kExitOk);
  const std::string s = Slurp(dir_ / "o" / "summary.json");
  EXPECT_NE(s.find("\"replications\": 3"), std::string::npos);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(Invoke({"mc", "--config", P("cfg.json"), "--replications", "0", "--out", P("o")}).code, kExitInput);
  Spit(dir_ / "bad.json", R"({"num_players": 3, "replicatons": 4})");
  const Result unknown = Invoke({"mc", "--config", P("bad.json"), "--out", P("o")});
  EXPECT_EQ(unknown.code, kExitInput);
  EXPECT_NE(unknown.err.find("replicatons"), std::string::npos);
  Spit(dir_ / "broken.csv", "i,j,n,wins_i\n0,1,4,3\n0,1,x,1\n");
  const Result broken = Invoke({"fit", "--data", P("broken.csv"), "--out", P("o")});
  EXPECT_EQ(broken.code, kExitInput);
  EXPECT_NE(broken.err.find("line 3"), std::string::npos);
  Spit(dir_ / "split.csv", "i,j,n,wins_i\n0,1,4,3\n2,3,4,3\n");
  EXPECT_EQ(Invoke({"fit", "--data", P("split.csv"), "--out", P("o")}).code, kExitInput);
  Spit(dir_ / "notjson.json", "{");
  EXPECT_EQ(Invoke({"mc", "--config", P("notjson.json"), "--out", P("o")}).code, kExitInput);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitInput);
}

TEST_F(CliTest, BalancedDataGivesZeroScores) {
  Spit(dir_ / "bal.csv", "i,j,n,wins_i\n0,1,4,2\n1,2,4,2\n0,2,4,2\n");
  ASSERT_EQ(Invoke({"fit", "--data", P("bal.csv"), "--out", P("f")}).code, kExitOk);
  const std::string fit = Slurp(dir_ / "f" / "fit.json");
  EXPECT_NE(fit.find("\"converged\": true"), std::string::npos);
}

}  // namespace
}  // namespace slslab::cli
