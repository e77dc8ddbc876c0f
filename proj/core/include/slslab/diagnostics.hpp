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


#ifndef SLSLAB_DIAGNOSTICS_HPP_
#define SLSLAB_DIAGNOSTICS_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "slslab/model.hpp"

namespace slslab {

struct Condition {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// value <= threshold
Condition AtMost(std::string name, double value, double threshold);
// value >= threshold
Condition AtLeast(std::string name, double value, double threshold);
bool AllPass(const std::vector<Condition>& conditions);

struct FisherBundle {
  Matrix fisher;
  Matrix fisher_pinv;  // inverse on the gauge subspace
  Gauge gauge = Gauge::kSumZero;
  Vector d;            // D_j = sqrt(F_jj)
  Matrix v_sq;
  double kappa = 1.0;  // D^2 <= kappa^2 F on the gauge subspace

  // Partition blocks; empty when no partition was given.
  std::optional<Partition> partition;
  Matrix f_tt, f_tn, f_nn;
  Matrix f_tt_inv;
  Vector d_target;          // sqrt(diag F_tt)
  Vector h;                 // sqrt(diag F_nn)
  double kappa_target = 1.0;

  Index dim() const { return fisher.rows(); }
};

FisherBundle fisher_bundle(const Matrix& fisher, Gauge gauge,
                           const std::optional<Partition>& partition,
                           std::optional<Matrix> v_sq = std::nullopt);
// F = -grad^2 f(point). V^2 is the model's score covariance at the truth and
// F(point) elsewhere.
FisherBundle fisher_bundle(const SlsModel& model, const Vector& point,
                           const std::optional<Partition>& partition);

struct DeviationRadius {
  double z = 0.0;
  double envelope = 0.0;  // sqrt(tr B) + sqrt(2 x |B|)
};
DeviationRadius deviation_radius(const Matrix& b, double x);

struct EffectiveDimensions {
  double p_g = 0.0;
  double p_d = 0.0;
  double p_h = 0.0;
};
EffectiveDimensions effective_dimensions(const FisherBundle& bundle);

struct DeviationSpec {
  double x = 0.0;
  Matrix b;  // B_D
  double z = 0.0;
  double envelope = 0.0;
  double r_d = 0.0;
  double r_inf = std::numeric_limits<double>::quiet_NaN();
  double p_g = 0.0, p_d = 0.0, p_h = 0.0;
  double omega_prob = 0.0;
};
double default_x(double sample_size);
// Full-model deviation spec: B_D = D F^+ V^2 F^+ D, r_D = z(B_D, x).
DeviationSpec deviation_spec(const FisherBundle& bundle, double x);
// Target-block spec: B_D = D_T F_tt^{-1} V_tt F_tt^{-1} D_T, r_D = z / sqrt(1 - omega).
DeviationSpec target_deviation_spec(const FisherBundle& bundle, double x,
                                    double omega);

struct RhoReport {
  double rho = 0.0;          // row l2 bound, the primary number
  Vector per_j;              // per-row contributions rho_j
  double rho_exact = 0.0;    // max_j sum_{m != j} |F_jm| / (D_j D_m)
  bool applicable = false;   // rho_exact < 1; the sup-norm bounds use rho_exact
};
RhoReport rho_dual(const Matrix& fisher, const Vector& d);
RhoReport rho_dual(const FisherBundle& bundle);

// Certified constant: analytic upper bound plus sampled lower witness.
struct Certificate {
  double value = 0.0;
  double analytic = std::numeric_limits<double>::quiet_NaN();
  double sampled = 0.0;
  bool certified = false;
  std::string dominant;  // "analytic" or "sampled"
};

inline constexpr int kDefaultDirections = 256;
inline constexpr std::uint64_t kDefaultDirectionSeed = 20260101;

Certificate tau3_estimate(const SlsModel& model, const Vector& point,
                          const Vector& d, double r,
                          int num_directions = kDefaultDirections,
                          std::uint64_t seed = kDefaultDirectionSeed);
Certificate tau4_estimate(const SlsModel& model, const Vector& point,
                          const Vector& d, double r,
                          int num_directions = kDefaultDirections,
                          std::uint64_t seed = kDefaultDirectionSeed);

// Third-order constant in the target directions, uniformly over the target
// D-ball of radius r_theta and the nuisance box |eta_m - eta*_m| <= box_m.
Certificate tau3_partial(const SlsModel& model, const Vector& point,
                         const Partition& partition, const Vector& d_target,
                         double r_theta, const Vector& nuisance_box,
                         int num_directions = kDefaultDirections,
                         std::uint64_t seed = kDefaultDirectionSeed);

enum class NuisanceNorm { kSup, kL2 };

struct CrossSmoothness {
  Certificate delta12;
  Certificate delta21;
};
CrossSmoothness cross_smoothness(const SlsModel& model, const Vector& point,
                                 const Partition& partition,
                                 const Vector& d_target, const Vector& h,
                                 double r_circ, NuisanceNorm norm,
                                 int num_directions = kDefaultDirections,
                                 std::uint64_t seed = kDefaultDirectionSeed);

// Box constants of the coordinate-wise analysis for a radius r_inf.
struct SupNormSmoothness {
  double tau3 = 0.0;
  double delta12 = 0.0;
  double delta21 = 0.0;
  bool certified = false;
};
SupNormSmoothness supnorm_smoothness(const SlsModel& model, const Vector& point,
                                     const Vector& d, double r_inf);

struct SupNormConstants {
  double rho = 0.0, delta12 = 0.0, delta21 = 0.0, tau3 = 0.0;
  double score_inf = 0.0;
  double r_inf = 0.0;
  double delta_b = 0.0;
  double delta_n = 0.0;
  double delta_inf = 0.0;
  std::vector<Condition> conditions;
  bool applicable = false;
};
SupNormConstants supnorm_constants(double rho, double delta12, double delta21,
                                   double tau3, double score_inf);

// r_inf = sqrt(2) / (1 - rho) * score_inf
double supnorm_radius(double rho, double score_inf);

// sup over |w|_o <= 1 of |M w|_2, exact for one row or few columns,
// otherwise the column-sum upper bound.
double rho_star(const FisherBundle& bundle, NuisanceNorm norm);

struct SmoothnessConstants {
  double tau3 = 0.0, tau4 = 0.0, c3 = 0.0, c4 = 0.0;
  Certificate tau3_cert, tau4_cert;
  double r_loc = 0.0;
  double kappa = 1.0;
  RhoReport rho;
};
// Full-model constants with localization radius r = radius_factor * r_D.
SmoothnessConstants smoothness_constants(const SlsModel& model,
                                         const FisherBundle& bundle,
                                         const DeviationSpec& spec,
                                         double radius_factor = 1.5,
                                         int num_directions = kDefaultDirections,
                                         std::uint64_t seed = kDefaultDirectionSeed);

// Constants of the partial / plug-in analysis.
struct PluginConstants {
  NuisanceNorm norm = NuisanceNorm::kSup;
  double r_circ = 0.0;
  double kappa = 1.0;  // max(1, kappa_target)
  double rho_star = 0.0;
  double rho2 = 0.0;
  Certificate delta12, delta21;
  Certificate tau3;
  double delta_b = 0.0;
  double delta_n_fixed = 0.0;   // partial-solution linearization constant
  double delta_n_plugin = 0.0;  // plug-in Fisher expansion constant
  double bias_radius = 0.0;     // bound on |D(theta_eta - theta*)|
  double r_loc = 0.0;
  double omega = 0.0;           // certified Fisher variation
  double omega_sampled = 0.0;   // lower witness
  // Cross derivative at theta* and Fisher variation vanish on all samples.
  bool semi_orthogonal = false;
  DeviationSpec target_spec;
  std::vector<Condition> conditions;
  bool applicable = false;
};
PluginConstants plugin_constants(const SlsModel& model,
                                 const FisherBundle& bundle, double r_circ,
                                 NuisanceNorm norm, double x,
                                 int num_directions = kDefaultDirections,
                                 std::uint64_t seed = kDefaultDirectionSeed,
                                 int omega_samples = 64);

std::vector<Condition> condition_report_3s(const FisherBundle& bundle,
                                           const DeviationSpec& spec,
                                           const SmoothnessConstants& constants,
                                           double sample_size,
                                           double rho_star = 0.0,
                                           double r_circ = 0.0);

}  // namespace slslab

#endif  // SLSLAB_DIAGNOSTICS_HPP_
