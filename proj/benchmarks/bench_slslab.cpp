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


#include <benchmark/benchmark.h>

#include "slslab/diagnostics.hpp"
#include "slslab/montecarlo.hpp"
#include "slslab/optimize.hpp"

namespace slslab {
namespace {

BtlModel Model(Index p) { return BtlModel(p, complete_design(p, 100), Vector::LinSpaced(p, -1, 1)); }

void BM_LoglikEval(benchmark::State& state) {
  const Index p = state.range(0);
  const BtlModel model = Model(p);
  const Realization real = model.simulate(1);
  for (auto _ : state) benchmark::DoNotOptimize(model.loglik_eval(real, model.truth()));
}
BENCHMARK(BM_LoglikEval)->Arg(10)->Arg(50)->Arg(100);

void BM_Mle(benchmark::State& state) {
  const Index p = state.range(0);
  const BtlModel model = Model(p);
  const Realization real = model.simulate(2);
  for (auto _ : state) benchmark::DoNotOptimize(mle(*real.data, SolverConfig{}));
}
BENCHMARK(BM_Mle)->Arg(10)->Arg(50)->Arg(100);

void BM_Tau3(benchmark::State& state) {
  const Index p = state.range(0);
  const BtlModel model = Model(p);
  const FisherBundle b = fisher_bundle(model, model.truth(), std::nullopt);
  for (auto _ : state) benchmark::DoNotOptimize(tau3_estimate(model, model.truth(), b.d, 1.0));
}
BENCHMARK(BM_Tau3)->Arg(10)->Arg(50);

void BM_McReplication(benchmark::State& state) {
  McConfig cfg;
  cfg.num_players = 10;
  cfg.design = complete_design(10, 100);
  cfg.true_scores = Vector::LinSpaced(10, -1, 1);
  cfg.replications = 1;
  cfg.x = 2.0;
  cfg.threads = 1;
  cfg.keep_raw = false;
  const BtlModel model(cfg.num_players, cfg.design, cfg.true_scores);
  const Realization real = model.simulate(3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_realization(model, cfg, real));
}
BENCHMARK(BM_McReplication);

}  // namespace
}  // namespace slslab

BENCHMARK_MAIN();
