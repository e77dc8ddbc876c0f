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
#include <set>

#include "oracles.hpp"
#include "slslab/expansions.hpp"
#include "slslab/montecarlo.hpp"

namespace slslab {
namespace {

using testing::RandomBtl;

Matrix CoupledFisher(Index p, double n) {
  Matrix f = Matrix::Identity(p, p) * 2.0;
  for (Index i = 0; i + 1 < p; ++i) f(i, i + 1) = f(i + 1, i) = 0.4;
  return f * n;
}

// Reports whose lhs is a remainder that vanishes for a quadratic log-likelihood.
bool IsRemainder(const std::string& name) {
  static const std::set<std::string> kNames = {
      "fisher_residual",         "wilks_residual",
      "supnorm_score_form",      "supnorm_fisher_form",
      "perturbed_score_form",    "perturbed_fisher_form",
      "semiparam_linearization", "plugin_fisher_expansion",
      "partial_uniform_expansion", "partial_fisher_variation"};
  return kNames.count(name) > 0 || name.rfind("pac_", 0) == 0;
}

TEST(QuadraticExactness, FullModelRemaindersVanish) {
  const Index p = 6;
  const Vector truth = Vector::LinSpaced(p, -0.5, 0.5);
  const QuadraticModel model(CoupledFisher(p, 400.0), truth, 400.0);
  McConfig cfg;
  cfg.replications = 1;
  cfg.x = 2.0;
  cfg.seed = 7;
  cfg.q_selectors = {0, 3};
  cfg.partition = Partition::FromTarget(p, {0, 1});
  cfg.pilot = PilotRule::Parse("noisy:0.3");
  int checked = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const RealizationResult r = evaluate_realization(model, cfg, model.simulate(s));
    ASSERT_FALSE(r.divergent);
    for (const auto& rep : r.reports) {
      EXPECT_FALSE(rep.violated()) << rep.name;
      if (!IsRemainder(rep.name)) continue;
      EXPECT_LE(rep.lhs, 1e-10) << rep.name;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20 * 8);
}

TEST(QuadraticExactness, DiagonalFisherFirstOrderIsExact) {
  const Index p = 5;
  const Matrix f = Vector::LinSpaced(p, 50, 250).asDiagonal();
  const QuadraticModel model(f, Vector::Zero(p), 100.0);
  McConfig cfg;
  cfg.replications = 1;
  cfg.x = 2.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const RealizationResult r = evaluate_realization(model, cfg, model.simulate(s));
    int seen = 0;
    for (const auto& rep : r.reports) {
      if (rep.name.rfind("supnorm_", 0) != 0 || rep.name == "supnorm_concentration") continue;
      EXPECT_LE(rep.lhs, 1e-10) << rep.name;
      EXPECT_TRUE(rep.applicable) << rep.name;
      ++seen;
    }
    EXPECT_EQ(seen, 5);
  }
}

TEST(QuadraticExactness, SemiparamBiasIsLinear) {
  const Index p = 5;
  const Vector truth = Vector::Zero(p);
  const QuadraticModel model(CoupledFisher(p, 100.0), truth, 100.0);
  const Partition part = Partition::FromTarget(p, {0, 2});
  const FisherBundle b = fisher_bundle(model, truth, part);
  const PluginConstants c = plugin_constants(model, b, 0.5, NuisanceNorm::kSup, 2.0);
  const Vector eta = (Vector(3) << 0.01, -0.02, 0.015).finished();
  const SemiparamBiasResult r = semiparam_bias(model, b, eta, c, Matrix(b.d_target.asDiagonal()));
  const Vector expect = -b.f_tt_inv * b.f_tn * eta;
  EXPECT_LE((r.linear_bias - expect).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((r.theta_eta - Select(truth, part.target) - expect).cwiseAbs().maxCoeff(), 1e-10);
  for (const auto& rep : r.reports) {
    if (rep.name == "semiparam_linearization") {
      EXPECT_LE(rep.lhs, 1e-10);
    }
  }
}

TEST(QuadraticExactness, PerturbedArgmaxMatchesPrediction) {
  const Index p = 4;
  const QuadraticModel model(CoupledFisher(p, 50.0), Vector::Ones(p), 50.0);
  SolverConfig cfg;
  cfg.grad_tol = 1e-12;
  const PerturbedResult lin = perturbed_argmax_reports(
      model, PerturbationSpec::Linear((Vector(4) << 1, -2, 0.5, 3).finished()), cfg);
  EXPECT_LE((lin.argmax - lin.prediction).cwiseAbs().maxCoeff(), 1e-10);
  const PerturbedResult ridge =
      perturbed_argmax_reports(model, PerturbationSpec::Ridge(p, 5.0), cfg);
  EXPECT_LE((ridge.argmax - ridge.prediction).cwiseAbs().maxCoeff(), 1e-10);
  for (const auto& rep : ridge.reports) {
    EXPECT_EQ(rep.name.rfind("perturbed_", 0), 0u);
    EXPECT_FALSE(rep.violated()) << rep.name;
  }
}

TEST(BtlReports, NoViolationsOnOmega) {
  const Index p = 8;
  const Vector truth = Vector::LinSpaced(p, -1, 1);
  const BtlModel model(p, complete_design(p, 300), truth);
  McConfig cfg;
  cfg.replications = 1;
  cfg.x = 2.0;
  cfg.seed = 1;
  cfg.q_selectors = {0};
  cfg.partition = Partition::FromTarget(p, {0, 1});
  cfg.pilot = PilotRule::Parse("noisy:0.2");
  int omega = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const RealizationResult r = evaluate_realization(model, cfg, model.simulate(s));
    ASSERT_FALSE(r.divergent);
    omega += r.on_omega;
    for (const auto& rep : r.reports) EXPECT_FALSE(rep.violated()) << rep.name << " seed " << s;
  }
  EXPECT_GT(omega, 30);
}

TEST(BtlReports, FisherResidualMatchesDirectComputation) {
  const Index p = 6;
  const Vector truth = Vector::LinSpaced(p, -1, 1);
  const BtlModel model(p, complete_design(p, 200), truth);
  const FullModelSetting s = full_model_setting(model, 2.0);
  const Realization real = model.simulate(3);
  SolverConfig sc;
  sc.grad_tol = 1e-12;
  const SolveResult fit = mle(*real.data, sc);
  const ExpansionReport rep = fisher_residual(fit.argmax.values, truth, s, real.score, true);
  const Matrix fp = s.bundle.fisher.completeOrthogonalDecomposition().pseudoInverse();
  const Vector u = fit.argmax.values - truth;
  const Vector e = s.bundle.d.cwiseInverse().asDiagonal() * s.bundle.fisher * (u - fp * real.score);
  EXPECT_NEAR(rep.lhs, e.norm(), 1e-8);
}

TEST(GaugeOperatorNorm, IdentityMaps) {
  const auto inst = RandomBtl(7, 4, 0.8, 30);
  const BtlModel model(7, inst.design, inst.truth);
  const FisherBundle b = fisher_bundle(model, inst.truth, std::nullopt);
  const Matrix dinv_f = b.d.cwiseInverse().asDiagonal() * b.fisher;
  EXPECT_NEAR(gauge_operator_norm(dinv_f, b), 1.0, 1e-10);
  const FisherBundle free = fisher_bundle(Matrix::Identity(3, 3) * 4.0, Gauge::kFree, std::nullopt);
  EXPECT_NEAR(gauge_operator_norm(Matrix::Identity(3, 3), free), 0.5, 1e-14);
}

TEST(DeltaMatrix, ZeroDiagonalAndScaling) {
  Matrix f(3, 3);
  f << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const Vector d = f.diagonal().cwiseSqrt();
  const Matrix dm = delta_matrix(f, d);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(dm(j, j), 0.0);
  EXPECT_NEAR(dm(0, 1), -0.5, 1e-15);
  EXPECT_NEAR(dm(0, 2), 0.0, 1e-15);
}

TEST(MakeReport, SlackAndOmega) {
  EXPECT_TRUE(MakeReport("a", 1e-11, 0.0, true, true).satisfied);
  EXPECT_FALSE(MakeReport("a", 1e-9, 0.0, true, true).satisfied);
  EXPECT_FALSE(MakeReport("a", 2.0, 1.0, false, true).violated());
  EXPECT_FALSE(MakeReport("a", 2.0, 1.0, true, false).violated());
  EXPECT_TRUE(MakeReport("a", 2.0, 1.0, true, true).violated());
}

TEST(NuisanceNormValue, SupAndL2) {
  const Vector w = (Vector(2) << 3, -4).finished();
  const Vector h = (Vector(2) << 1, 2).finished();
  EXPECT_DOUBLE_EQ(NuisanceNormValue(w, h, NuisanceNorm::kSup), 8.0);
  EXPECT_DOUBLE_EQ(NuisanceNormValue(w, h, NuisanceNorm::kL2), std::sqrt(73.0));
}

}  // namespace
}  // namespace slslab
