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


#ifndef SLSLAB_OPTIMIZE_HPP_
#define SLSLAB_OPTIMIZE_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "slslab/model.hpp"

namespace slslab {

using Objective = std::function<ModelEval(const Vector&)>;

struct SolverConfig {
  double grad_tol = 1e-9;  // sup-norm of the gauge-projected gradient
  int max_iters = 200;
  double damping = 1.0;
  double line_search = 0.5;

  void Validate() const;
};

struct SolveResult {
  ScoreVector argmax;
  double value = 0.0;
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  bool diverged = false;
  std::string provenance;
};

// Scores escaping this sup-norm are treated as a divergent MLE.
inline constexpr double kDivergenceBound = 50.0;

// Damped Newton with Armijo backtracking on the gauge subspace of init.
SolveResult maximize_concave(const Objective& objective, const ScoreVector& init,
                             const SolverConfig& cfg);

Objective btl_objective(const ComparisonData& data);

SolveResult mle(const ComparisonData& data, const SolverConfig& cfg);

// Maximizes over the target coordinates of base with the rest frozen.
// The returned argmax is the full vector with the target block replaced.
SolveResult partial_maximize(const Objective& objective, const Vector& base,
                             const std::vector<Index>& target,
                             const SolverConfig& cfg);

SolveResult partial_mle(const ComparisonData& data, const Vector& nuisance_values,
                        const std::vector<Index>& target_indices,
                        const SolverConfig& cfg);

SolveResult plugin_estimate(const ComparisonData& data,
                            const Vector& pilot_nuisance,
                            const std::vector<Index>& target_indices,
                            const SolverConfig& cfg,
                            const std::string& pilot_provenance = "user");

// Each round returns (nuisance step, target step).
std::vector<std::pair<SolveResult, SolveResult>> alternate_optimize(
    const Objective& objective, const Vector& init, const Partition& partition,
    int rounds, const SolverConfig& cfg, Gauge gauge = Gauge::kSumZero);

std::vector<std::pair<SolveResult, SolveResult>> alternate_optimize(
    const ComparisonData& data, const Vector& init_target,
    const std::vector<Index>& target_indices, int rounds,
    const SolverConfig& cfg);

SolveResult coordinate_sweep(const Objective& objective, const ScoreVector& init,
                             int sweeps, const SolverConfig& cfg);

SolveResult coordinate_sweep(const ComparisonData& data, const ScoreVector& init,
                             int sweeps, const SolverConfig& cfg);

}  // namespace slslab

#endif  // SLSLAB_OPTIMIZE_HPP_
