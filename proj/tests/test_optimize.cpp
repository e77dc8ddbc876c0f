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

#include "oracles.hpp"
#include "slslab/errors.hpp"
#include "slslab/optimize.hpp"

namespace slslab {
namespace {

using testing::GoldenMax;
using testing::RandomBtl;

TEST(Mle, TwoPlayerClosedForm) {
  const ComparisonData d(2, {{0, 1, 4, 3}});
  const SolveResult r = mle(d, SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.argmax.values(0) - r.argmax.values(1), std::log(3.0), 1e-9);
  EXPECT_NEAR(r.argmax.values.sum(), 0.0, 1e-12);
  EXPECT_EQ(r.provenance, "mle");
}

TEST(Mle, BalancedDataGivesZero) {
  const ComparisonData d(3, {{0, 1, 4, 2}, {1, 2, 6, 3}, {0, 2, 2, 1}});
  const SolveResult r = mle(d, SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.argmax.values.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Mle, ThreePlayerChainMatchesGoldenSection) {
  // Path 0-1-2: the likelihood separates into two independent pairs.
  const ComparisonData d(3, {{0, 1, 10, 7}, {1, 2, 5, 1}});
  SolverConfig tight;
  tight.grad_tol = 1e-13;
  const SolveResult r = mle(d, tight);
  ASSERT_TRUE(r.converged);
  auto pair = [](double n, double w) {
    return GoldenMax([&](double t) { return w * t - n * std::log1p(std::exp(t)); }, -10, 10);
  };
  // Golden section on values resolves the maximizer to about sqrt(eps).
  EXPECT_NEAR(r.argmax.values(0) - r.argmax.values(1), pair(10, 7), 1e-7);
  EXPECT_NEAR(r.argmax.values(1) - r.argmax.values(2), pair(5, 1), 1e-7);
  EXPECT_NEAR(r.argmax.values(0) - r.argmax.values(1), std::log(7.0 / 3.0), 1e-12);
  EXPECT_NEAR(r.argmax.values(1) - r.argmax.values(2), std::log(1.0 / 4.0), 1e-12);
}

TEST(Mle, GradientVanishesAndValueIsMaximal) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = RandomBtl(12, 50 + s, 0.5, 60);
    const SolveResult r = mle(inst.data, SolverConfig{});
    ASSERT_TRUE(r.converged) << s;
    EXPECT_LE(btl_grad(r.argmax.values, inst.data).cwiseAbs().maxCoeff(), 1e-9);
    for (int k = 0; k < 20; ++k) {
      Vector probe = r.argmax.values + 0.05 * Vector::Random(12);
      EXPECT_LE(btl_loglik(probe, inst.data), r.value + 1e-12);
    }
  }
}

TEST(Mle, AllWinPlayerDiverges) {
  const ComparisonData d(3, {{0, 1, 5, 5}, {0, 2, 5, 5}, {1, 2, 5, 2}});
  const SolveResult r = mle(d, SolverConfig{});
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.converged);
}

TEST(Mle, ExistenceCriterion) {
  EXPECT_FALSE(btl_mle_exists(ComparisonData(2, {{0, 1, 3, 3}})));
  EXPECT_TRUE(btl_mle_exists(ComparisonData(2, {{0, 1, 3, 2}})));
  // A cycle of single wins is strongly connected.
  EXPECT_TRUE(btl_mle_exists(ComparisonData(3, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 0}})));
  EXPECT_FALSE(btl_mle_exists(ComparisonData(3, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 1}})));
}

TEST(Mle, DisconnectedDataThrows) {
  const ComparisonData d(4, {{0, 1, 2, 1}, {2, 3, 2, 1}});
  EXPECT_THROW(mle(d, SolverConfig{}), DesignError);
}

TEST(MaximizeConcave, RejectsNonConcaveObjective) {
  const Objective f = [](const Vector& v) {
    return ModelEval{v.squaredNorm(), 2 * v, 2 * Matrix::Identity(v.size(), v.size())};
  };
  EXPECT_THROW(maximize_concave(f, ScoreVector{Vector::Ones(2), Gauge::kFree, {}}, SolverConfig{}),
               ConcavityError);
}

TEST(MaximizeConcave, QuadraticInOneStep) {
  const Matrix a = (Matrix(2, 2) << 3, 1, 1, 2).finished();
  const Vector b = (Vector(2) << 1, -2).finished();
  const Objective f = [&](const Vector& v) {
    return ModelEval{b.dot(v) - 0.5 * v.dot(a * v), b - a * v, -a};
  };
  const SolveResult r =
      maximize_concave(f, ScoreVector{Vector::Zero(2), Gauge::kFree, {}}, SolverConfig{});
  EXPECT_LE((r.argmax.values - a.ldlt().solve(b)).norm(), 1e-12);
  EXPECT_LE(r.iterations, 2);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.grad_tol = 0;
  EXPECT_THROW(c.Validate(), InputError);
  c = SolverConfig{};
  c.max_iters = 0;
  EXPECT_THROW(c.Validate(), InputError);
  c = SolverConfig{};
  c.damping = 1.5;
  EXPECT_THROW(c.Validate(), InputError);
}

TEST(PartialMaximize, QuadraticClosedForm) {
  // f = -1/2 (v - s)^T A (v - s); theta_eta = s_t - A_tt^{-1} A_tn (eta - s_n).
  Matrix a(4, 4);
  a << 4, 1, 0.5, 0, 1, 3, 0, 0.2, 0.5, 0, 2, 0.1, 0, 0.2, 0.1, 1;
  const Vector s = (Vector(4) << 0.3, -0.1, 0.7, 0.2).finished();
  const Objective f = [&](const Vector& v) {
    const Vector u = v - s;
    return ModelEval{-0.5 * u.dot(a * u), -a * u, -a};
  };
  Vector base = s;
  base(2) += 0.4;
  base(3) -= 0.3;
  const SolveResult r = partial_maximize(f, base, {0, 1}, SolverConfig{});
  const Vector shift = base.tail(2) - s.tail(2);
  const Vector expect =
      s.head(2) - a.topLeftCorner(2, 2).ldlt().solve(a.topRightCorner(2, 2) * shift);
  EXPECT_LE((r.argmax.values.head(2) - expect).norm(), 1e-12);
  EXPECT_EQ(r.argmax.values.tail(2), base.tail(2));
}

TEST(PluginEstimate, AtMleNuisanceReproducesMle) {
  const auto inst = RandomBtl(8, 5, 0.8, 50);
  const SolveResult full = mle(inst.data, SolverConfig{});
  const std::vector<Index> target = {1, 4};
  const Partition part = Partition::FromTarget(8, target);
  const SolveResult plug =
      plugin_estimate(inst.data, Select(full.argmax.values, part.nuisance), target, SolverConfig{});
  EXPECT_LE((Select(plug.argmax.values, target) - Select(full.argmax.values, target)).norm(), 1e-9);
  EXPECT_EQ(plug.provenance, "plugin:user");
  EXPECT_THROW(plugin_estimate(inst.data, Vector::Zero(2), target, SolverConfig{}), InputError);
}

TEST(AlternateOptimize, ConvergesToMle) {
  const auto inst = RandomBtl(8, 6, 0.8, 50);
  const SolveResult full = mle(inst.data, SolverConfig{});
  const auto trace = alternate_optimize(inst.data, Vector::Zero(3), {0, 2, 5}, 200, SolverConfig{});
  ASSERT_FALSE(trace.empty());
  const Vector last = trace.back().second.argmax.values;
  EXPECT_LE((last - full.argmax.values).cwiseAbs().maxCoeff(), 1e-6);
  for (size_t k = 1; k < trace.size(); ++k) {
    EXPECT_GE(trace[k].second.value, trace[k - 1].second.value - 1e-9);
  }
  EXPECT_THROW(alternate_optimize(inst.data, Vector::Zero(3), {0, 2, 5}, 0, SolverConfig{}),
               InputError);
}

TEST(CoordinateSweep, ConvergesToMle) {
  const auto inst = RandomBtl(7, 7, 0.9, 50);
  const SolveResult full = mle(inst.data, SolverConfig{});
  const SolveResult cs = coordinate_sweep(
      inst.data, ScoreVector{Vector::Zero(7), Gauge::kSumZero, {}}, 500, SolverConfig{});
  EXPECT_LE((cs.argmax.values - full.argmax.values).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(cs.argmax.values.sum(), 0.0, 1e-10);
}

}  // namespace
}  // namespace slslab
