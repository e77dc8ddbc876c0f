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


#ifndef SLSLAB_MONTECARLO_HPP_
#define SLSLAB_MONTECARLO_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "slslab/expansions.hpp"

namespace slslab {

enum class PilotKind { kTrueNuisance, kFullMleNuisance, kNoisyTrue };

struct PilotRule {
  PilotKind kind = PilotKind::kTrueNuisance;
  double radius = 0.0;  // NoisyTrue: |H(eta_hat - eta*)|_inf <= radius

  std::string ToString() const;
  // "true", "mle" or "noisy:<radius>"
  static PilotRule Parse(const std::string& text);
};

struct McConfig {
  // BTL experiment; ignored by the overload that receives a model.
  Index num_players = 0;
  std::vector<DesignEdge> design;
  Vector true_scores;

  int replications = 0;
  double x = std::numeric_limits<double>::quiet_NaN();  // NaN: log n
  std::uint64_t seed = 0;
  std::optional<Partition> partition;
  PilotRule pilot;
  NuisanceNorm nuisance_norm = NuisanceNorm::kSup;
  std::vector<std::string> q_maps = {"identity", "d", "fisher"};
  std::vector<Index> q_selectors;  // single-coordinate maps e_j^T
  double radius_factor = 1.5;
  int num_directions = kDefaultDirections;
  int threads = 0;  // 0: hardware concurrency
  bool keep_raw = true;
  SolverConfig solver;

  void Validate() const;
};

// Worker count: explicit value or hardware concurrency, capped by
// SLSLAB_THREADS, at least 1.
int ResolveThreads(int requested);

struct RawRow {
  int replication = 0;
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool on_omega = false;
  bool applicable = false;
};

struct RateSummary {
  std::string name;
  int evaluated = 0;    // on Omega and applicable
  int applicable = 0;   // applicable, any Omega
  int violations = 0;
  double rate = 0.0;
  double se = 0.0;
  double max_ratio = 0.0;
  double mean_lhs = 0.0;
  double mean_rhs = 0.0;
};

struct RiskSummary {
  std::string q_name;
  double r_q = 0.0;
  double c4 = 0.0;
  double alpha = 0.0;
  double lower = 0.0, upper = 0.0;
  double empirical = 0.0;
  double empirical_se = 0.0;
  double bracket_width = 0.0;
  bool bracket_applicable = false;  // alpha < 1
  bool se_ok = false;               // se < 10% of bracket width
  bool contained = false;
  double first_moment = 0.0;
  double first_moment_rhs = 0.0;
  double first_moment_se = 0.0;
  bool first_moment_ok = false;
};

struct PluginRiskSummary {
  std::string pilot;
  double r_circ = 0.0;
  double r_q = 0.0;
  double p_d = 0.0, p_h = 0.0;
  double c_h = 0.0, c_d = 0.0;
  double empirical_risk = 0.0;
  double oracle_risk = 0.0;   // partial MLE at the true nuisance
  double lhs = 0.0;           // |sqrt(E |Q(theta_hat - theta*)|^2) - sqrt(R_Q)|
  double rhs = 0.0;
  bool within = false;
  double inflation = 0.0;     // sqrt(risk) - sqrt(oracle risk)
  double inflation_se = 0.0;  // paired, delta method
  double bias_rms = 0.0;      // sqrt E |Q F^{-1} F_tn (eta_hat - eta*)|^2
  double variance_rms = 0.0;  // sqrt E |Q F^{-1} grad_theta zeta|^2
  double inflation_bound = 0.0;
  double adaptivity_ratio = 0.0;
  double remainder_ratio = 0.0;
  double omega_coverage = 0.0;
  std::vector<Condition> conditions;
};

struct McSummary {
  int replications = 0;
  int used = 0;
  int divergent = 0;
  double divergent_rate = 0.0;
  bool unreliable = false;

  double x = 0.0;
  double r_d = 0.0;
  double omega_coverage = 0.0;
  double omega_se = 0.0;
  double omega_floor = 0.0;  // 1 - 3 e^{-x}
  bool coverage_ok = false;  // coverage >= floor - 3 se

  double tau3 = 0.0, kappa = 0.0, rho = 0.0, rho_exact = 0.0, r_loc = 0.0;
  double p_d = 0.0;
  std::vector<Condition> conditions;
  bool theory_applicable = false;
  int supnorm_applicable = 0;

  double mean_score_inf = 0.0;
  double supnorm_relative_residual = 0.0;  // mean score-form lhs / |D^{-1} grad zeta|_inf
  double delta_corrected_win_rate = 0.0;   // corrected <= first-order residual

  std::vector<RateSummary> reports;
  int total_violations = 0;
  std::vector<RiskSummary> risks;
  std::optional<PluginRiskSummary> plugin;
  std::vector<RawRow> raw;

  bool deterministic_audits_pass() const { return total_violations == 0; }
};

// Per-replication inputs of the risk statements.
struct RiskSample {
  bool on_omega = false;
  double loss_sq = 0.0;   // |Q(v~ - v*)|^2
  double lin_sq = 0.0;    // |Q F^+ grad zeta|^2
  double score_sq = 0.0;  // |D F^+ grad zeta|^2
};
// q_norm = |Q F^+ D| on the gauge, p_d = tr B_D.
RiskSummary risk_audit(const std::string& q_name,
                       const std::vector<RiskSample>& samples, double q_norm,
                       double tau3, double p_d);

struct PluginRiskSample {
  bool on_omega = false;
  double loss_sq = 0.0;    // |Q(theta_hat - theta*)|^2
  double oracle_sq = 0.0;  // |Q(theta~(eta*) - theta*)|^2
  double lin_sq = 0.0;     // |Q F^{-1}(grad_theta zeta - F_tn(eta_hat - eta*))|^2
  double bias_sq = 0.0;
  double var_sq = 0.0;
  double nuisance_dev = 0.0;  // |H(eta_hat - eta*)|_o
  double score_norm = 0.0;    // |D F^{-1} grad_theta zeta|
};
PluginRiskSummary plugin_risk_audit(const std::vector<PluginRiskSample>& samples,
                                    const PluginConstants& c, double q_norm,
                                    double sample_size);

McSummary run_mc(const McConfig& cfg);

// The per-replication evaluation of run_mc applied to one given realization.
struct RealizationResult {
  SolveResult fit;
  bool divergent = false;
  bool on_omega = false;
  std::vector<ExpansionReport> reports;
};
RealizationResult evaluate_realization(const SlsModel& model, const McConfig& cfg,
                                       const Realization& realization);
McSummary run_mc(const SlsModel& model, const McConfig& cfg);

}  // namespace slslab

#endif  // SLSLAB_MONTECARLO_HPP_
