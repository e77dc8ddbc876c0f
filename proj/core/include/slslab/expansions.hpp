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


#ifndef SLSLAB_EXPANSIONS_HPP_
#define SLSLAB_EXPANSIONS_HPP_

#include <string>
#include <vector>

#include "slslab/diagnostics.hpp"
#include "slslab/optimize.hpp"

namespace slslab {

// Absolute slack added to every comparison so that exact identities whose
// residual is pure rounding (bound 0) still count as satisfied.
inline constexpr double kAbsoluteSlack = 1e-10;

struct ExpansionReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool on_omega = true;
  bool applicable = true;  // hypotheses of the statement hold
  bool satisfied = true;   // lhs <= rhs (1 + 1e-10) + slack, or off Omega

  double ratio() const;
  // Counted as a violation of a deterministic statement.
  bool violated() const { return on_omega && applicable && !satisfied; }
};

ExpansionReport MakeReport(std::string name, double lhs, double rhs,
                           bool on_omega, bool applicable);

// Everything needed for the full-model l2 statements.
struct FullModelSetting {
  FisherBundle bundle;
  DeviationSpec spec;
  SmoothnessConstants constants;
  std::vector<Condition> conditions;
  bool applicable = false;
};
FullModelSetting full_model_setting(const SlsModel& model, double x,
                                    double radius_factor = 1.5,
                                    int num_directions = kDefaultDirections,
                                    std::uint64_t seed = kDefaultDirectionSeed);

// |D F^+ grad zeta| <= r_D
bool on_omega(const FullModelSetting& s, const Vector& score);

// |Q F^+ D| restricted to the range of D^{-1} F (all of R^p without gauge).
double gauge_operator_norm(const Matrix& q, const FisherBundle& bundle);

std::vector<ExpansionReport> concentration_check(const Vector& estimate,
                                                 const Vector& truth,
                                                 const FullModelSetting& s,
                                                 bool omega);
ExpansionReport fisher_residual(const Vector& estimate, const Vector& truth,
                                const FullModelSetting& s, const Vector& score,
                                bool omega);
ExpansionReport wilks_residual(double loglik_estimate, double loglik_truth,
                               const FullModelSetting& s, const Vector& score,
                               bool omega);
ExpansionReport pac_loss_residual(const Matrix& q, const std::string& name,
                                  const Vector& estimate, const Vector& truth,
                                  const FullModelSetting& s, const Vector& score,
                                  bool omega);

// Standard Q maps: identity on the gauge, D, D^{-1} F and selectors.
struct NamedMap {
  std::string name;
  Matrix q;
};
std::vector<NamedMap> default_q_maps(const FisherBundle& bundle,
                                     const std::vector<Index>& selectors);

Matrix delta_matrix(const Matrix& fisher, const Vector& d);

// Coordinate-wise statements for u = estimate - truth against the linear
// term a (= grad zeta for the MLE).
std::vector<ExpansionReport> supnorm_residuals(const Vector& estimate,
                                               const Vector& truth,
                                               const Matrix& fisher,
                                               const Matrix& fisher_pinv,
                                               const Vector& d, const Vector& a,
                                               const SupNormConstants& c,
                                               bool omega);
std::vector<ExpansionReport> supnorm_residuals(const Vector& estimate,
                                               const Vector& truth,
                                               const FisherBundle& bundle,
                                               const Vector& score,
                                               const SupNormConstants& c,
                                               bool omega);

// Sup-norm constants for one linear term a: rho from (F, d), box constants
// from the model at radius r_inf.
SupNormConstants supnorm_setting(const SlsModel& model, const Matrix& fisher,
                                 const Vector& d, const Vector& a);

// Separable terms are quadratic, t_j(v) = -(curvature_j / 2)(v - center_j)^2,
// so that g = f + sum_j t_j(v_j) stays concave.
struct PerturbationSpec {
  enum class Kind { kLinear, kSeparable };
  Kind kind = Kind::kLinear;
  Vector a;          // linear term
  Vector curvature;  // -t_j''
  Vector center;

  static PerturbationSpec Linear(Vector a);
  static PerturbationSpec Ridge(Index p, double lambda);
  // M = grad t(v*) for the separable case, a for the linear case.
  Vector m_vector(const Vector& truth) const;
};

struct PerturbedResult {
  Vector argmax;      // v° = argmax g
  Vector prediction;  // v* + F_g^{-1} M
  Vector d;           // metric used by the reports
  SupNormConstants constants;
  std::vector<ExpansionReport> reports;
};
PerturbedResult perturbed_argmax_reports(const SlsModel& model,
                                         const PerturbationSpec& perturbation,
                                         const SolverConfig& cfg);

struct SemiparamBiasResult {
  Vector theta_eta;        // partial maximizer of f at the given eta
  Vector linear_bias;      // -F_tt^{-1} F_tn (eta - eta*)
  double nuisance_dev = 0.0;  // |H(eta - eta*)|_o
  std::vector<ExpansionReport> reports;
};
SemiparamBiasResult semiparam_bias(const SlsModel& model,
                                   const FisherBundle& bundle,
                                   const Vector& eta, const PluginConstants& c,
                                   const Matrix& q);

struct PluginExpansionResult {
  double nuisance_dev = 0.0;
  double score_norm = 0.0;  // |D F_tt^{-1} grad_theta zeta|
  bool on_omega = false;
  double bias_magnitude = 0.0;      // |Q F^{-1} F_tn (eta_hat - eta*)|
  double variance_magnitude = 0.0;  // |Q F^{-1} grad_theta zeta|
  std::vector<ExpansionReport> reports;
};
// theta_hat is the full vector (target from the plug-in fit, nuisance = pilot).
PluginExpansionResult plugin_expansion(const SlsModel& model,
                                       const FisherBundle& bundle,
                                       const PluginConstants& c,
                                       const Vector& theta_hat,
                                       const Vector& score, const Matrix& q);

double NuisanceNormValue(const Vector& w, const Vector& h, NuisanceNorm norm);

}  // namespace slslab

#endif  // SLSLAB_EXPANSIONS_HPP_
