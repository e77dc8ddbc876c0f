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
#include <cstdlib>

#include "slslab/errors.hpp"
#include "slslab/montecarlo.hpp"
#include "slslab/rng.hpp"

namespace slslab {
namespace {

McConfig SmallBtl(int replications) {
  McConfig cfg;
  cfg.num_players = 6;
  cfg.design = complete_design(6, 80);
  cfg.true_scores = Vector::LinSpaced(6, -1, 1);
  cfg.replications = replications;
  cfg.x = 2.0;
  cfg.seed = 42;
  cfg.q_selectors = {0};
  cfg.partition = Partition::FromTarget(6, {0, 1});
  cfg.pilot = PilotRule::Parse("noisy:0.2");
  return cfg;
}

void ExpectSameSummary(const McSummary& a, const McSummary& b) {
  ASSERT_EQ(a.reports.size(), b.reports.size());
  EXPECT_EQ(a.omega_coverage, b.omega_coverage);
  EXPECT_EQ(a.divergent, b.divergent);
  for (size_t k = 0; k < a.reports.size(); ++k) {
    EXPECT_EQ(a.reports[k].name, b.reports[k].name);
    EXPECT_EQ(a.reports[k].mean_lhs, b.reports[k].mean_lhs);
    EXPECT_EQ(a.reports[k].max_ratio, b.reports[k].max_ratio);
  }
  ASSERT_EQ(a.risks.size(), b.risks.size());
  for (size_t k = 0; k < a.risks.size(); ++k) EXPECT_EQ(a.risks[k].empirical, b.risks[k].empirical);
  ASSERT_EQ(a.raw.size(), b.raw.size());
  for (size_t k = 0; k < a.raw.size(); ++k) EXPECT_EQ(a.raw[k].lhs, b.raw[k].lhs);
  ASSERT_EQ(a.plugin.has_value(), b.plugin.has_value());
  if (a.plugin) {
    EXPECT_EQ(a.plugin->empirical_risk, b.plugin->empirical_risk);
  }
}

TEST(PilotRule, ParseAndFormat) {
  EXPECT_EQ(PilotRule::Parse("true").kind, PilotKind::kTrueNuisance);
  EXPECT_EQ(PilotRule::Parse("mle").kind, PilotKind::kFullMleNuisance);
  const PilotRule n = PilotRule::Parse("noisy:0.2");
  EXPECT_EQ(n.kind, PilotKind::kNoisyTrue);
  EXPECT_EQ(n.radius, 0.2);
  EXPECT_EQ(n.ToString(), "noisy:0.2");
  EXPECT_EQ(PilotRule::Parse(n.ToString()).radius, n.radius);
  EXPECT_THROW(PilotRule::Parse("noisy:-1"), InputError);
  EXPECT_THROW(PilotRule::Parse("bogus"), InputError);
}

TEST(McConfig, Validation) {
  McConfig cfg = SmallBtl(0);
  EXPECT_THROW(cfg.Validate(), InputError);
  cfg.replications = 10;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.q_selectors = {17};
  EXPECT_THROW(cfg.Validate(), InputError);
}

TEST(ResolveThreads, ExplicitAndCapped) {
  unsetenv("SLSLAB_THREADS");
  EXPECT_EQ(ResolveThreads(3), 3);
  EXPECT_GE(ResolveThreads(0), 1);
  setenv("SLSLAB_THREADS", "2", 1);
  EXPECT_EQ(ResolveThreads(8), 2);
  unsetenv("SLSLAB_THREADS");
}

TEST(RunMc, SingleReplicationIsDeterministic) {
  McConfig cfg = SmallBtl(1);
  const McSummary a = run_mc(cfg);
  const McSummary b = run_mc(cfg);
  ExpectSameSummary(a, b);
  EXPECT_EQ(a.replications, 1);
}

TEST(RunMc, ThreadCountDoesNotChangeResults) {
  McConfig cfg = SmallBtl(40);
  cfg.threads = 1;
  const McSummary one = run_mc(cfg);
  cfg.threads = 4;
  const McSummary four = run_mc(cfg);
  ExpectSameSummary(one, four);
  EXPECT_EQ(one.total_violations, 0);
  EXPECT_FALSE(one.unreliable);
}

TEST(RunMc, SeedChangesResults) {
  McConfig cfg = SmallBtl(5);
  const McSummary a = run_mc(cfg);
  cfg.seed = 43;
  const McSummary b = run_mc(cfg);
  EXPECT_NE(a.reports[0].mean_lhs, b.reports[0].mean_lhs);
}

TEST(RunMc, QuadraticRiskEqualsOracle) {
  const Index p = 4;
  Matrix f = Matrix::Identity(p, p) * 100.0;
  f(0, 1) = f(1, 0) = 20.0;
  const QuadraticModel model(f, Vector::Zero(p), 100.0);
  McConfig cfg;
  cfg.replications = 4000;
  cfg.x = 2.0;
  cfg.seed = 5;
  const McSummary s = run_mc(model, cfg);
  ASSERT_FALSE(s.risks.empty());
  for (const auto& r : s.risks) {
    EXPECT_EQ(r.alpha, 0.0) << r.q_name;
    EXPECT_DOUBLE_EQ(r.lower, r.r_q);
    EXPECT_DOUBLE_EQ(r.upper, r.r_q);
    // Unrestricted to Omega the risk is exactly R_Q in expectation.
    EXPECT_NEAR(r.empirical, r.r_q, 5 * r.empirical_se + 0.05 * r.r_q) << r.q_name;
  }
  EXPECT_EQ(s.total_violations, 0);
}

TEST(RiskAudit, Arithmetic) {
  std::vector<RiskSample> samples;
  for (int k = 0; k < 100; ++k) samples.push_back({true, 1.0, 1.0, 4.0});
  const RiskSummary r = risk_audit("q", samples, 2.0, 0.01, 4.0);
  // C4 = sqrt(mean score_sq^2) / p_d = 1, alpha = q_norm 0.75 tau3 C4 p_d / sqrt(R_Q).
  EXPECT_NEAR(r.c4, 1.0, 1e-15);
  EXPECT_NEAR(r.r_q, 1.0, 1e-15);
  EXPECT_NEAR(r.alpha, 2.0 * 0.75 * 0.01 * 4.0, 1e-15);
  EXPECT_NEAR(r.lower, std::pow(1 - r.alpha, 2), 1e-15);
  EXPECT_NEAR(r.upper, std::pow(1 + r.alpha, 2), 1e-15);
  EXPECT_NEAR(r.empirical, 1.0, 1e-15);
  EXPECT_TRUE(r.contained);
  EXPECT_NEAR(r.first_moment_rhs, 1.0 + 2.0 * 0.75 * 0.01 * 4.0, 1e-15);
}

TEST(PluginRiskAudit, ZeroBiasMatchesOracle) {
  PluginConstants c;
  std::vector<PluginRiskSample> samples;
  for (int k = 0; k < 50; ++k) {
    const double v = 0.5 + 0.01 * k;
    samples.push_back({true, v, v, v, 0.0, v, 0.0, 1.0});
  }
  const PluginRiskSummary s = plugin_risk_audit(samples, c, 1.0, 100.0);
  EXPECT_DOUBLE_EQ(s.inflation, 0.0);
  EXPECT_DOUBLE_EQ(s.bias_rms, 0.0);
  EXPECT_NEAR(s.empirical_risk, s.oracle_risk, 1e-15);
}

TEST(EvaluateRealization, MatchesRunMcRawRows) {
  McConfig cfg = SmallBtl(1);
  const McSummary s = run_mc(cfg);
  const BtlModel model(cfg.num_players, cfg.design, cfg.true_scores);
  const Realization real = model.simulate(SubSeed(cfg.seed, kStreamData, 0));
  const RealizationResult r = evaluate_realization(model, cfg, real);
  ASSERT_EQ(r.reports.size(), s.raw.size());
  for (size_t k = 0; k < r.reports.size(); ++k) {
    EXPECT_EQ(r.reports[k].name, s.raw[k].name);
    EXPECT_EQ(r.reports[k].lhs, s.raw[k].lhs);
  }
}

}  // namespace
}  // namespace slslab
