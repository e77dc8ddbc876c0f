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


#include "slslab/optimize.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "slslab/errors.hpp"

namespace slslab {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double ProjectedGradNorm(const Vector& grad, Gauge gauge) {
  if (grad.size() == 0) return 0.0;
  return ProjectToGauge(grad, gauge).cwiseAbs().maxCoeff();
}

// Solves A d = g for the reduced negative Hessian A, failing on indefinite A.
Vector NewtonDirection(const Matrix& a, const Vector& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector& lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() < -1e-10 * scale) {
    std::ostringstream os;
    os << "objective is not concave: Hessian eigenvalue " << -lam.minCoeff();
    throw ConcavityError(os.str());
  }
  const Matrix& v = es.eigenvectors();
  Vector coef = v.transpose() * g;
  for (Index k = 0; k < lam.size(); ++k) {
    coef(k) = lam(k) > 1e-14 * scale ? coef(k) / lam(k) : 0.0;
  }
  return v * coef;
}

}  // namespace

void SolverConfig::Validate() const {
  if (!(grad_tol > 0)) throw InputError("grad_tol must be positive");
  if (max_iters < 1) throw InputError("max_iters must be >= 1");
  if (!(damping > 0 && damping <= 1)) throw InputError("damping must be in (0,1]");
  if (!(line_search > 0 && line_search < 1)) {
    throw InputError("line_search factor must be in (0,1)");
  }
}

SolveResult maximize_concave(const Objective& objective, const ScoreVector& init,
                             const SolverConfig& cfg) {
  cfg.Validate();
  const Index p = init.values.size();
  const Matrix u = GaugeBasis(p, init.gauge);
  Vector v = ProjectToGauge(init.values, init.gauge);
  ModelEval cur = objective(v);

  SolveResult res;
  res.argmax = init;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    res.final_grad_norm = ProjectedGradNorm(cur.gradient, init.gauge);
    if (res.final_grad_norm <= cfg.grad_tol) {
      res.converged = true;
      break;
    }
    if (v.size() > 0 && v.cwiseAbs().maxCoeff() > kDivergenceBound) {
      res.diverged = true;
      break;
    }
    const Vector g = u.transpose() * cur.gradient;
    const Matrix a = -(u.transpose() * cur.hessian * u);
    const Vector step = u * NewtonDirection(a, g);
    const double slope = cur.gradient.dot(step);
    if (!(slope > 0)) break;  // no ascent direction left at this precision

    double t = cfg.damping;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= cfg.line_search) {
      const Vector cand = v + t * step;
      ModelEval next = objective(cand);
      if (!std::isfinite(next.value)) continue;
      // Near the optimum the value gain drops below rounding; fall back to
      // requiring a smaller projected gradient.
      const bool rounding = t * slope <= 1e-13 * (1.0 + std::abs(cur.value));
      const bool ok =
          rounding ? ProjectedGradNorm(next.gradient, init.gauge) < res.final_grad_norm
                   : next.value >= cur.value + kArmijo * t * slope;
      if (ok) {
        v = cand;
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!res.converged && !res.diverged) {
    res.final_grad_norm = ProjectedGradNorm(cur.gradient, init.gauge);
    res.converged = res.final_grad_norm <= cfg.grad_tol;
    if (v.size() > 0 && v.cwiseAbs().maxCoeff() > kDivergenceBound) {
      res.diverged = true;
    }
  }
  res.argmax.values = v;
  res.value = cur.value;
  res.iterations = it;
  return res;
}

Objective btl_objective(const ComparisonData& data) {
  return [&data](const Vector& v) { return btl_eval(v, data); };
}

SolveResult mle(const ComparisonData& data, const SolverConfig& cfg) {
  RequireConnected(data.num_players(), data.design());
  ScoreVector init{Vector::Zero(data.num_players()), Gauge::kSumZero, {}};
  SolveResult res = maximize_concave(btl_objective(data), init, cfg);
  if (!btl_mle_exists(data)) {
    res.converged = false;
    res.diverged = true;
  }
  res.provenance = "mle";
  return res;
}

SolveResult partial_maximize(const Objective& objective, const Vector& base,
                             const std::vector<Index>& target,
                             const SolverConfig& cfg) {
  auto embed = [&](const Vector& theta) {
    Vector full = base;
    for (size_t k = 0; k < target.size(); ++k) full(target[k]) = theta(k);
    return full;
  };
  Objective restricted = [&](const Vector& theta) {
    const ModelEval e = objective(embed(theta));
    return ModelEval{e.value, Select(e.gradient, target),
                     Select(e.hessian, target, target)};
  };
  ScoreVector init{Select(base, target), Gauge::kFree, {}};
  SolveResult inner = maximize_concave(restricted, init, cfg);
  SolveResult res = inner;
  res.argmax.values = embed(inner.argmax.values);
  res.argmax.gauge = Gauge::kFree;
  res.provenance = "partial";
  return res;
}

SolveResult partial_mle(const ComparisonData& data, const Vector& nuisance_values,
                        const std::vector<Index>& target_indices,
                        const SolverConfig& cfg) {
  const Index p = data.num_players();
  const Partition part = Partition::FromTarget(p, target_indices);
  if (nuisance_values.size() != static_cast<Index>(part.nuisance.size())) {
    throw InputError("nuisance vector length does not match the partition");
  }
  Vector base = Vector::Zero(p);
  for (size_t k = 0; k < part.nuisance.size(); ++k) {
    base(part.nuisance[k]) = nuisance_values(k);
  }
  SolveResult res = partial_maximize(btl_objective(data), base, part.target, cfg);
  res.argmax.partition = part;
  return res;
}

SolveResult plugin_estimate(const ComparisonData& data,
                            const Vector& pilot_nuisance,
                            const std::vector<Index>& target_indices,
                            const SolverConfig& cfg,
                            const std::string& pilot_provenance) {
  SolveResult res = partial_mle(data, pilot_nuisance, target_indices, cfg);
  res.provenance = "plugin:" + pilot_provenance;
  return res;
}

std::vector<std::pair<SolveResult, SolveResult>> alternate_optimize(
    const Objective& objective, const Vector& init, const Partition& partition,
    int rounds, const SolverConfig& cfg, Gauge gauge) {
  if (rounds < 1) throw InputError("alternating optimization needs K >= 1");
  partition.Validate(init.size());
  std::vector<std::pair<SolveResult, SolveResult>> out;
  Vector v = init;
  for (int k = 0; k < rounds; ++k) {
    SolveResult eta_step = partial_maximize(objective, v, partition.nuisance, cfg);
    SolveResult theta_step =
        partial_maximize(objective, eta_step.argmax.values, partition.target, cfg);
    const double move = (theta_step.argmax.values - v).cwiseAbs().maxCoeff();
    v = theta_step.argmax.values;
    theta_step.argmax.values = ProjectToGauge(v, gauge);
    theta_step.argmax.gauge = gauge;
    theta_step.argmax.partition = partition;
    eta_step.provenance = "alternate:nuisance";
    theta_step.provenance = "alternate:target";
    out.emplace_back(std::move(eta_step), std::move(theta_step));
    if (move < cfg.grad_tol) break;
  }
  return out;
}

std::vector<std::pair<SolveResult, SolveResult>> alternate_optimize(
    const ComparisonData& data, const Vector& init_target,
    const std::vector<Index>& target_indices, int rounds,
    const SolverConfig& cfg) {
  const Index p = data.num_players();
  RequireConnected(p, data.design());
  const Partition part = Partition::FromTarget(p, target_indices);
  if (init_target.size() != static_cast<Index>(part.target.size())) {
    throw InputError("initial target length does not match the partition");
  }
  Vector init = Vector::Zero(p);
  for (size_t k = 0; k < part.target.size(); ++k) init(part.target[k]) = init_target(k);
  return alternate_optimize(btl_objective(data), init, part, rounds, cfg,
                            Gauge::kSumZero);
}

SolveResult coordinate_sweep(const Objective& objective, const ScoreVector& init,
                             int sweeps, const SolverConfig& cfg) {
  cfg.Validate();
  if (sweeps < 1) throw InputError("coordinate sweep needs sweeps >= 1");
  Vector v = ProjectToGauge(init.values, init.gauge);
  ModelEval cur = objective(v);
  SolveResult res;
  res.argmax = init;
  int s = 0;
  for (; s < sweeps; ++s) {
    if (ProjectedGradNorm(cur.gradient, init.gauge) <= cfg.grad_tol) {
      res.converged = true;
      break;
    }
    for (Index k = 0; k < v.size(); ++k) {
      const double g = cur.gradient(k);
      const double h = -cur.hessian(k, k);
      if (h < -1e-10 * std::max(1.0, std::abs(cur.hessian(k, k)))) {
        throw ConcavityError("negative curvature along a coordinate");
      }
      if (h <= 0 || g == 0) continue;
      const double step = g / h;
      double t = cfg.damping;
      for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= cfg.line_search) {
        Vector cand = v;
        cand(k) += t * step;
        ModelEval next = objective(cand);
        if (std::isfinite(next.value) &&
            next.value >= cur.value + kArmijo * t * g * step) {
          v = std::move(cand);
          cur = std::move(next);
          break;
        }
      }
    }
    if (init.gauge == Gauge::kSumZero) {
      v = ProjectToGauge(v, init.gauge);
      cur = objective(v);
    }
    if (v.size() > 0 && v.cwiseAbs().maxCoeff() > kDivergenceBound) {
      res.diverged = true;
      break;
    }
  }
  res.final_grad_norm = ProjectedGradNorm(cur.gradient, init.gauge);
  res.converged = res.final_grad_norm <= cfg.grad_tol;
  res.argmax.values = v;
  res.value = cur.value;
  res.iterations = s;
  res.provenance = "coordinate_sweep";
  return res;
}

SolveResult coordinate_sweep(const ComparisonData& data, const ScoreVector& init,
                             int sweeps, const SolverConfig& cfg) {
  RequireConnected(data.num_players(), data.design());
  return coordinate_sweep(btl_objective(data), init, sweeps, cfg);
}

}  // namespace slslab
